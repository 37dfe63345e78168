import io
import random

import pytest
from hypothesis import given, strategies as st

from hitkit import catalog as ct, factor as fc, formula as fm
from hitkit import hitting as ht, refutation as rf


def test_format_entry():
    assert ct.format_entry([(1, -2), (2, -3)]) == "3 2 | 1 -2 ; 2 -3"
    assert ct.format_entry([(1,)], n=4) == "4 1 | 1"
    assert ct.format_entry([()]) == "0 1 |"
    with pytest.raises(fm.FormulaError):
        ct.format_entry([(5,)], n=2)


def test_parse_entry():
    e = ct.parse_entry("3 2 | 1 -2 ; 2 -3")
    assert e.n == 3
    assert e.formula == fm.formula([(1, -2), (2, -3)])
    e = ct.parse_entry("2 1 | 1")
    assert e.formula == ((1,),)


def test_parse_entry_errors():
    for bad in ("3 2  1 -2", "x 2 | 1", "3 | 1", "3 2 | 1",
                "1 1 | 2", "2 2 | 1 ; 1"):
        with pytest.raises((fm.FormulaError, ValueError)):
            ct.parse_entry(bad)


@given(st.integers(min_value=0, max_value=2 ** 30))
def test_entry_round_trip(seed):
    rng = random.Random(seed)
    f = ct.random_hitting(rng, 5, rng.randrange(8), drop=rng.randrange(2))
    e = ct.parse_entry(ct.format_entry(f))
    assert e.formula == f


def test_save_load_round_trip(tmp_path):
    fs = [ct.cycle_mu(5), ct.hard_eight(), ((1,),)]
    path = str(tmp_path / "cat.txt")
    count = ct.save(path, fs, comment="demo\ncatalog")
    assert count == 3
    entries = ct.load(path)
    assert [e.formula for e in entries] == fs
    text = open(path).read()
    assert text.startswith("# demo\n# catalog\n")


def test_save_load_stream_and_blank_lines():
    buf = io.StringIO()
    ct.save(buf, [((1, 2),)], n=3)
    buf.write("\n# trailing comment\n")
    buf.seek(0)
    entries = ct.load(buf)
    assert len(entries) == 1
    assert entries[0].n == 3


def test_load_reports_line_numbers(tmp_path):
    path = str(tmp_path / "bad.txt")
    with open(path, "w") as fp:
        fp.write("2 1 | 1\n2 9 | 1\n")
    with pytest.raises(fm.FormulaError, match="line 2"):
        ct.load(path)


def test_cycle_mu_properties():
    with pytest.raises(fm.FormulaError):
        ct.cycle_mu(3)
    f4 = ct.cycle_mu(4)
    assert ht.is_unsat_hitting(f4)
    assert ht.deficiency(f4) == 2
    f5 = ct.cycle_mu(5)
    assert ht.is_unsat_hitting(f5)
    assert ht.is_regular(f5)
    assert ht.is_saturated_mu(f5)
    f6 = ct.cycle_mu(6)
    assert not ht.is_hitting(f6)
    assert ht.is_mu(f6)
    assert ht.deficiency(f6) == 2


def test_hard_eight_properties():
    f = ct.hard_eight()
    assert len(f) == 8
    assert ht.is_unsat_hitting(f)
    assert ht.is_regular(f)
    assert fc.is_irreducible(f)


def test_hard_eight_split_properties():
    g = ct.hard_eight_split()
    assert len(g) == 9
    assert ht.is_unsat_hitting(g)
    assert not fc.is_irreducible(g)
    assert (-1, 3, -4) not in g
    assert fm.formula([(-1, 2, 3, -4), (-1, -2, 3, -4)]) == tuple(
        c for c in g if len(c) == 4)
