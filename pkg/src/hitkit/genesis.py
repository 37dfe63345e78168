"""Exhaustive generation of unsatisfiable hitting formulas up to isomorphism.

The search adds clauses in nondecreasing size order and keeps one labeled
representative per isomorphism class at every level: candidate clauses are
filtered to one per orbit under the parent's automorphisms, and the
extended formula is accepted only when the added clause lies in the same
automorphism orbit as the canonical deletion target (a largest clause with
the smallest canonical rank). Any accepted formula therefore appears
exactly once, regardless of the order its clauses were found in.

Partial formulas that cannot reach an unsatisfiable leaf are discarded
early: more surviving assignments than the remaining clauses can cover,
fewer than they must each privately cover, a clash failure, or (when
targeting irreducible formulas) a subset equivalent to a single clause.
Leaves are filtered by class: every unsatisfiable hitting formula on
exactly n variables, the regular ones, or the regular irreducible ones.
"""

import itertools
import multiprocessing
from collections import namedtuple

from . import factor as fc
from . import formula as fm
from . import hitting as ht
from . import iso

KINDS = ("uh", "ruh", "iuh")

GenesisRun = namedtuple("GenesisRun", "formulas stats")

_STAT_KEYS = ("nodes", "leaves", "pruned_high", "pruned_low",
              "pruned_factor", "pruned_capacity", "orbit_merged",
              "rejected", "seen_skipped")


def _all_clauses(n):
    """Every nonempty clause over variables 1..n, smallest first."""
    out = []
    for size in range(1, n + 1):
        for vs in itertools.combinations(range(1, n + 1), size):
            for signs in itertools.product((1, -1), repeat=size):
                c = tuple(v * s for v, s in zip(vs, signs))
                pos = sum(1 << (v - 1) for v, s in zip(vs, signs) if s > 0)
                neg = sum(1 << (v - 1) for v, s in zip(vs, signs) if s < 0)
                out.append((c, pos, neg))
    out.sort(key=lambda t: (len(t[0]), t[0]))
    return out


def _clashes(p1, n1, p2, n2):
    return (p1 & n2) | (n1 & p2)


def _find(uf, x):
    while uf[x] != x:
        uf[x] = uf[uf[x]]
        x = uf[x]
    return x


def _union(uf, a, b):
    ra, rb = _find(uf, a), _find(uf, b)
    if ra != rb:
        uf[max(ra, rb)] = min(ra, rb)


def _has_new_factor(clauses, c, n, m_prefix, m_target):
    """Subset equivalent to a single clause, among subsets containing c.

    Subsets avoiding c were already examined when their own largest clause
    was added. Closure under intersection loses no factors, so only the
    intersection-closed subsets are tested, by counting models.
    """
    bases = set()
    frontier = {frozenset(c) & frozenset(d) for d in clauses}
    while frontier:
        b = frontier.pop()
        if b in bases:
            continue
        bases.add(b)
        for d in clauses:
            nb = b & frozenset(d)
            if nb not in bases:
                frontier.add(nb)
    allc = clauses + (c,)
    for b in bases:
        members = [d for d in allc if b <= frozenset(d)]
        if len(members) < 2:
            continue
        if sum(1 << (n - len(d)) for d in members) != 1 << (n - len(b)):
            continue
        if len(members) < m_prefix:
            return True
        if 1 < m_prefix < m_target:
            return True
    return False


def _accepts(clauses, c, child):
    """Is c in the same automorphism orbit as the canonical deletion target?"""
    data = iso.canonical_data(child)
    mc = len(child)
    max_size = len(child[-1])
    cand = [i for i in range(mc) if len(child[i]) == max_size]
    delta = min(cand, key=lambda i: data.clause_ranks[i])
    uf = list(range(mc))
    index = {d: i for i, d in enumerate(child)}
    for g in data.generators:
        for i, d in enumerate(child):
            _union(uf, i, index[iso.apply_signed_perm_clause(d, g)])
    return _find(uf, index[c]) == _find(uf, delta)


def _leaf_ok(child, used_mask, n, acc, opts):
    if acc != 1 << n:
        return False
    if used_mask != (1 << n) - 1:
        return False
    kind = opts["kind"]
    if kind in ("ruh", "iuh") and not ht.is_regular(child):
        return False
    if kind == "iuh":
        if opts["prune_factor"]:
            assert fc.is_irreducible(child, max_vars=n)
        elif not fc.is_irreducible(child, max_vars=n):
            return False
    return True


def _extend(node, n, m, opts, out, stats, frontier=None, depth=None, seen=None):
    clauses, masks, acc, used_mask, cands = node
    mp = len(clauses)
    stats["nodes"] += 1
    if mp == m:
        child = fm.formula(clauses)
        if _leaf_ok(child, used_mask, n, acc, opts):
            stats["leaves"] += 1
            out.append(child)
        return
    if frontier is not None and mp == depth:
        frontier.append(node)
        return
    remaining = m - mp - 1
    valid = []
    for cand in cands:
        c, pc, nc = cand
        acc2 = acc + (1 << (n - len(c)))
        count = (1 << n) - acc2
        if opts["prune_high"] and count > remaining * (1 << (n - len(c))):
            stats["pruned_high"] += 1
            continue
        if opts["prune_low"] and count < remaining:
            stats["pruned_low"] += 1
            continue
        if opts["capacity_prune"] and not _capacity_ok(
                clauses, c, n, remaining):
            stats["pruned_capacity"] += 1
            continue
        if opts["prune_factor"] and _has_new_factor(clauses, c, n, mp + 1, m):
            stats["pruned_factor"] += 1
            continue
        valid.append(cand)
    if not valid:
        return
    if seen is None:
        reps = _orbit_representatives(clauses, valid, n, stats)
    else:
        reps = valid
    for cand in reps:
        c, pc, nc = cand
        child = fm.formula(clauses + (c,))
        if seen is not None:
            key = iso.canonical_key(child)
            level = seen[mp + 1]
            if key in level:
                stats["seen_skipped"] += 1
                continue
            level.add(key)
        elif not _accepts(clauses, c, child):
            stats["rejected"] += 1
            continue
        sub = tuple(t for t in cands
                    if len(t[0]) >= len(c) and _clashes(t[1], t[2], pc, nc))
        node2 = (clauses + (c,), masks + ((pc, nc),), acc + (1 << (n - len(c))),
                 used_mask | pc | nc, sub)
        _extend(node2, n, m, opts, out, stats, frontier, depth, seen)


def _capacity_ok(clauses, c, n, remaining):
    # a regular leaf needs two occurrences of each polarity of every
    # variable, and a future clause supplies at most one per variable
    counts = {}
    for d in clauses + (c,):
        for l in d:
            counts[l] = counts.get(l, 0) + 1
    for v in range(1, n + 1):
        need = max(0, 2 - counts.get(v, 0)) + max(0, 2 - counts.get(-v, 0))
        if need > remaining:
            return False
    return True


def _orbit_representatives(clauses, valid, n, stats):
    gens = iso.padded_generators(fm.formula(clauses), n)
    if not gens:
        return valid
    index = {t[0]: i for i, t in enumerate(valid)}
    uf = list(range(len(valid)))
    for g in gens:
        for i, t in enumerate(valid):
            img = iso.apply_signed_perm_clause(t[0], g)
            j = index.get(img)
            assert j is not None, "automorphism left the candidate set"
            _union(uf, i, j)
    reps = [t for i, t in enumerate(valid) if _find(uf, i) == i]
    stats["orbit_merged"] += len(valid) - len(reps)
    return reps


def _worker(args):
    node, n, m, opts = args
    out = []
    stats = dict.fromkeys(_STAT_KEYS, 0)
    _extend(node, n, m, opts, out, stats)
    return out, stats


def generate_full(n, m, kind="iuh", jobs=1, prune_high=True, prune_low=True,
                  prune_factor=None, capacity_prune=False, dedup="orbit"):
    """All formulas of the class on exactly n variables and m clauses.

    One representative per isomorphism class, sorted by canonical key.
    kind: "uh" for unsatisfiable hitting, "ruh" adds regularity, "iuh"
    regularity and irreducibility. dedup: "orbit" for the canonical
    construction path, "seen" for level-wide key deduplication (serial,
    used as a cross-check).
    """
    if kind not in KINDS:
        raise ValueError("unknown kind %r" % (kind,))
    if n < 1 or m < 1:
        raise ValueError("need n >= 1 and m >= 1")
    if n > 20:
        raise ValueError("generation is exhaustive, n > 20 is not sensible")
    if prune_factor is None:
        prune_factor = kind == "iuh"
    if prune_factor and kind != "iuh":
        raise ValueError("the factor rule only preserves irreducible targets")
    if capacity_prune and kind == "uh":
        raise ValueError("the capacity rule only preserves regular targets")
    if dedup not in ("orbit", "seen"):
        raise ValueError("dedup must be 'orbit' or 'seen'")
    opts = {"kind": kind, "prune_high": prune_high, "prune_low": prune_low,
            "prune_factor": prune_factor, "capacity_prune": capacity_prune}
    root = ((), (), 0, 0, tuple(_all_clauses(n)))
    out = []
    stats = dict.fromkeys(_STAT_KEYS, 0)
    if dedup == "seen":
        seen = [set() for _ in range(m + 1)]
        _extend(root, n, m, opts, out, stats, seen=seen)
    elif jobs <= 1:
        _extend(root, n, m, opts, out, stats)
    else:
        frontier = []
        depth = 2 if m > 2 else m - 1
        _extend(root, n, m, opts, out, stats, frontier=frontier, depth=depth)
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(jobs) as pool:
            for sub, st in pool.imap_unordered(
                    _worker, [(nd, n, m, opts) for nd in frontier]):
                out.extend(sub)
                for k, v in st.items():
                    stats[k] += v
    out = [iso.canonical_form(f) for f in out]
    out.sort(key=iso.canonical_key)
    return GenesisRun(out, stats)


def generate(n, m, kind="iuh", **kw):
    return generate_full(n, m, kind, **kw).formulas
