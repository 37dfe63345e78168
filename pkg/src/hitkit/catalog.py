"""Catalog files and named example formulas.

A catalog is a plain text file with one formula per line:

    n m | 1 -2 ; 2 -3 ; ...

where n is the number of variables the formula lives on (it may exceed
the largest variable actually used), m the number of clauses, clauses are
separated by semicolons and literals by spaces. Lines starting with #
and blank lines are skipped.
"""

from collections import namedtuple

from . import formula as fm
from . import hitting as ht

Entry = namedtuple("Entry", "n formula")


def format_entry(f, n=None):
    f = fm.formula(f)
    used = fm.variables(f)
    if n is None:
        n = max(used) if used else 0
    elif used and max(used) > n:
        raise fm.FormulaError("formula uses variables beyond 1..%d" % n)
    body = " ; ".join(" ".join(str(l) for l in c) for c in f)
    return "%d %d | %s" % (n, len(f), body) if body else "%d %d |" % (n, len(f))


def parse_entry(line):
    head, sep, body = line.partition("|")
    if not sep:
        raise fm.FormulaError("missing '|' in catalog line: %r" % line)
    parts = head.split()
    if len(parts) != 2:
        raise fm.FormulaError("expected 'n m |' prefix, got %r" % head)
    n, m = int(parts[0]), int(parts[1])
    # an empty segment is the empty clause, so "0 1 |" round-trips
    segments = body.split(";") if (body.strip() or m > 0) else []
    clauses = []
    for seg in segments:
        clauses.append(fm.clause(int(t) for t in seg.split()))
    f = fm.formula(clauses)
    if len(f) != m:
        raise fm.FormulaError(
            "line declares %d clauses but has %d distinct" % (m, len(f)))
    used = fm.variables(f)
    if used and max(used) > n:
        raise fm.FormulaError("line declares n=%d but uses %d" % (n, max(used)))
    return Entry(n, f)


def save(fp, formulas, n=None, comment=None):
    """Write formulas as catalog lines. fp: path or open file."""
    if isinstance(fp, str):
        with open(fp, "w") as real:
            return save(real, formulas, n, comment)
    if comment:
        for line in comment.splitlines():
            fp.write("# %s\n" % line)
    count = 0
    for f in formulas:
        fp.write(format_entry(f, n) + "\n")
        count += 1
    return count


def load(fp):
    """Read catalog lines. fp: path or open file. Returns list of Entry."""
    if isinstance(fp, str):
        with open(fp) as real:
            return load(real)
    out = []
    for lineno, line in enumerate(fp, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            out.append(parse_entry(line))
        except (ValueError, fm.FormulaError) as e:
            raise fm.FormulaError("line %d: %s" % (lineno, e)) from e
    return out


def cycle_mu(m):
    """m clauses: an implication cycle on m-2 variables plus the full
    positive and full negative clauses. Minimally unsatisfiable for
    every m >= 4, hitting (and regular) for m <= 5."""
    if m < 4:
        raise fm.FormulaError("cycle_mu needs m >= 4")
    n = m - 2
    cl = [[i, -(i % n + 1)] for i in range(1, n + 1)]
    cl.append(list(range(1, n + 1)))
    cl.append([-i for i in range(1, n + 1)])
    return fm.formula(cl)


def hard_eight():
    """The 8-clause irreducible hitting formula on 4 variables whose
    shortest refutation has 19 steps, the maximum for its size."""
    return fm.formula([
        [1, 2, 3], [-1, -2, -3], [-1, 2, 4], [1, -2, -4], [1, -3, 4],
        [-1, 3, -4], [2, -3, -4], [-2, 3, 4],
    ])


def hard_eight_split():
    """hard_eight with the clause {-1, 3, -4} split on variable 2,
    giving a reducible 9-clause hitting formula of hardness 20."""
    base = [c for c in hard_eight() if c != (-1, 3, -4)]
    return fm.formula(base + [(-1, 2, 3, -4), (-1, -2, 3, -4)])


def random_hitting(rng, max_vars, splits, drop=0):
    return ht.random_hitting_formula(rng, max_vars, splits, drop)
