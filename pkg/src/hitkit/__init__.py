"""Unsatisfiable hitting formulas: generation, classification, proof hardness."""

__version__ = "0.1.0"
