import itertools
import random

import pytest

from hitkit import catalog as ct, factor as fc, formula as fm
from hitkit import hitting as ht, refutation as rf


def test_intersection_clause():
    assert fc.intersection_clause([(1, 2, -3), (1, -3, 4)]) == (1, -3)
    assert fc.intersection_clause([(1,), (-1,)]) == ()
    with pytest.raises(fm.FormulaError):
        fc.intersection_clause([])


def test_is_factor_basic():
    host = fm.formula([(1, 2), (1, -2), (-1, 3), (-1, -3)])
    assert fc.is_factor(host, [(1, 2), (1, -2)])
    assert fc.is_factor(host, [(-1, 3), (-1, -3)])
    assert not fc.is_factor(host, [(1, 2), (-1, 3)])
    assert fc.is_factor(host, host)  # whole unsat formula: basis ()
    with pytest.raises(fm.FormulaError):
        fc.is_factor(host, [(5, 6)])


def test_is_factor_arithmetic_matches_counting():
    rng = random.Random(11)
    for _ in range(80):
        f = ct.random_hitting(rng, 4, rng.randrange(2, 8))
        idx = [i for i in range(len(f)) if rng.random() < 0.6]
        if len(idx) < 2:
            continue
        sub = [f[i] for i in idx]
        basis = fc.intersection_clause(sub)
        slow = fm.entails_clause(sub, basis)
        assert fc.is_factor(f, sub) == slow


def test_factor_witness():
    host = fm.formula([(1, 2), (1, -2), (-1,)])
    w = fc.factor_witness(host, [(1, 2), (1, -2)])
    assert w.basis == (1,)
    assert {host[i] for i in w.indices} == {(1, 2), (1, -2)}
    assert fc.factor_witness(host, [(-1,), (1, 2)]) is None


def test_closed_subsets_cover_factors():
    f = ct.hard_eight_split()
    subs = fc.closed_subsets(f)
    assert all(len(w.indices) >= 2 for w in subs)
    for w in subs:
        members = [f[i] for i in w.indices]
        assert fc.intersection_clause(members) == w.basis
        # closure property: no clause outside contains the basis
        bset = set(w.basis)
        for i, c in enumerate(f):
            if i not in w.indices:
                assert not bset <= set(c)


def test_enumerate_factors_on_reducible():
    f = ct.hard_eight_split()
    pairs = [tuple(sorted((f.index(fm.clause(c)) for c in sub)))
             for sub, _ in [(((-1, 2, 3, -4), (-1, -2, 3, -4)), None)]]
    found = {w.indices for w in fc.enumerate_factors(f)}
    assert pairs[0] in found
    w = next(w for w in fc.enumerate_factors(f) if w.indices == pairs[0])
    assert w.basis == (-1, 3, -4)


def test_irreducible_knowns():
    assert fc.is_irreducible(ct.cycle_mu(5))
    assert fc.is_irreducible(ct.hard_eight())
    assert not fc.is_irreducible(ct.hard_eight_split())
    assert fc.is_irreducible([(1,), (-1,)])  # m <= 2 trivially
    # unsat proper subset counts as a factor (empty basis)
    f = fm.formula([(1,), (-1,), (2, 3)])
    assert not fc.is_irreducible(f)


def test_clause_interpolant_basic():
    c = fc.clause_interpolant([(1, 2), (1, -2)], [(-1, 3), (-1, -3)])
    assert c == (1,)
    assert fc.clause_interpolant([(1,)], [(2,)]) is None
    # unsat left part entails anything; () is incompatible with everything
    assert fc.clause_interpolant([(1,), (-1,)], [(2,)]) == ()
    with pytest.raises(fm.FormulaError):
        fc.clause_interpolant([], [(1,)])


def test_clause_interpolant_against_naive_search():
    rng = random.Random(5)
    lits = [1, -1, 2, -2, 3, -3]
    all_clauses = [c for k in range(0, 4)
                   for c in itertools.combinations(lits, k)
                   if len({abs(l) for l in c}) == k]
    for _ in range(60):
        f = ct.random_hitting(rng, 3, rng.randrange(2, 7))
        if len(f) < 3:
            continue
        r = rng.randrange(1, len(f) - 1)
        idx = rng.sample(range(len(f)), r + 1)
        s = [f[i] for i in idx]
        t = [f[i] for i in range(len(f)) if i not in idx]
        got = fc.clause_interpolant(s, t)
        naive = None
        for c in all_clauses:
            cc = fm.clause(c)
            if fm.entails_clause(s, cc, 6) and \
                    fm.count_models(fm.formula(t + [cc]), 3) == 0:
                naive = cc
                break
        assert (got is None) == (naive is None)
        if got is not None:
            assert fm.entails_clause(s, got)
            assert fm.count_models(fm.formula(t + [got]), 3) == 0


def test_strongly_irreducible_separation():
    # irreducible but pseudo-reducible: the first two clauses entail (2),
    # which contradicts the rest
    f = fm.formula([(1, 2), (-1,), (-2,)])
    assert fc.is_irreducible(f)
    assert not fc.is_strongly_irreducible(f)
    idx, c = next(fc.pseudo_factors(f))
    s = [f[i] for i in idx]
    t = [f[i] for i in range(len(f)) if i not in idx]
    assert fm.entails_clause(s, c)
    assert fm.count_models(fm.formula(t + [c]), 2) == 0


def test_strongly_irreducible_without_saturation():
    # not saturated, yet strongly irreducible
    f = fm.formula([(1, -2), (2, -3), (3, -4), (-1, 4), (1, 2, 3),
                    (-1, -2, -3, -4)])
    assert ht.is_mu(f)
    assert not ht.is_saturated_mu(f)
    assert fc.is_strongly_irreducible(f)


def test_irreducible_equals_strong_on_hitting_knowns():
    for f in (ct.cycle_mu(5), ct.hard_eight(), ct.hard_eight_split()):
        assert fc.is_irreducible(f) == fc.is_strongly_irreducible(f)


def fixture_dag(name):
    import os
    path = os.path.join(os.path.dirname(__file__), "fixtures", name)
    with open(path) as fp:
        return rf.RefutationDag.from_text(fp.read())


def test_decomposition_joins_refutations():
    g = ct.hard_eight_split()
    sub = [(-1, 2, 3, -4), (-1, -2, 3, -4)]
    basis = (-1, 3, -4)
    reduced = fm.formula([tuple(l for l in d if l not in basis) for d in sub])
    assert reduced == ((-2,), (2,))
    inner = rf.shortest_refutation(reduced)
    outer = fixture_dag("derived19.proof")
    joined = fc.build_decomposition_refutation(g, sub, inner, outer)
    assert len(joined) == 21
    joined.validate(axioms=g)


def test_decomposition_rejects_wrong_parts():
    g = ct.hard_eight_split()
    sub = [(-1, 2, 3, -4), (-1, -2, 3, -4)]
    inner = rf.shortest_refutation(fm.formula([(-2,), (2,)]))
    bad_outer = fixture_dag("cycle5.proof")
    with pytest.raises(rf.ProofError):
        fc.build_decomposition_refutation(g, sub, inner, bad_outer)
    with pytest.raises(fm.FormulaError):
        fc.build_decomposition_refutation(g, [(1, 5)], inner, bad_outer)
