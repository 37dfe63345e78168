"""Propositional encoding of "this formula has an s-step resolution refutation".

Positions 1..m hold the axioms in formula order (sound for minimally
unsatisfiable inputs, where every refutation reads every axiom), positions
m+1..s are resolvents, position s is pinned to the empty clause. Each
resolvent has exactly two incoming arcs, carries the union of its
premises' literals minus its pivot variable, and the pivot is the unique
variable appearing in both polarities in that union. Solving for
increasing s decides hardness exactly.

Optional strengthenings, each preserving at least one shortest refutation:
  reuse: when two axioms are resolved together at the first resolvent
    position, one of them must be read again later (valid for strongly
    irreducible formulas with more than two clauses).
  symmetry: the refutation ends with a positive unit, its negation, then
    the empty clause, the unit variable drawn from one representative per
    automorphism orbit.
  ordering: consecutive resolvents either form an arc or have
    nonincreasing smallest-premise indices (any refutation can be
    reshuffled into this shape by swapping adjacent independent steps).
"""

import time
from collections import namedtuple

from . import factor as fc
from . import formula as fm
from . import hitting as ht
from . import iso
from . import refutation as rf
from . import satgate


class EncodingError(RuntimeError):
    pass


class Encoding:
    def __init__(self, f, s, reuse=False, reuse_all_positions=False,
                 symmetry=False, ordering=False):
        f = fm.formula(f)
        m = len(f)
        if s <= m:
            raise EncodingError("need s > m, got s=%d for %d clauses" % (s, m))
        if () in f:
            raise EncodingError("the empty clause is already a refutation")
        self.formula = f
        self.s = s
        self.m = m
        self.vars = fm.variables(f)
        self.pool = {}
        self.clauses = []
        self.flags = {"reuse": reuse, "reuse_all_positions": reuse_all_positions,
                      "symmetry": symmetry, "ordering": ordering}
        # symmetry pins positions s-1 and s-2, which must be resolvents,
        # and assumes the final units are derived, not axioms; a unit
        # axiom may have to feed the last step directly, so its presence
        # disables the shape constraint
        self.symmetry_active = (symmetry and s >= m + 3 and
                                all(len(c) > 1 for c in f))
        self._build()

    def _var(self, *key):
        v = self.pool.get(key)
        if v is None:
            v = len(self.pool) + 1
            self.pool[key] = v
        return v

    @property
    def nvars(self):
        return len(self.pool)

    def _axiom_has(self, i, lit):
        return lit in self.formula[i - 1]

    def _pos(self, i, v):
        return self._var("pos", i, v)

    def _neg(self, i, v):
        return self._var("neg", i, v)

    def _arc(self, i, j):
        return self._var("arc", i, j)

    def _carry(self, i, j, v, sign):
        """Literal meaning: arc(i,j) and position i contains the literal.

        Constant-folded for axiom premises; None when the axiom lacks it.
        """
        lit = v if sign > 0 else -v
        if i <= self.m:
            return self._arc(i, j) if self._axiom_has(i, lit) else None
        key = ("carry", i, j, v, sign)
        fresh = key not in self.pool
        cv = self._var(*key)
        if fresh:
            a = self._arc(i, j)
            p = self._pos(i, v) if sign > 0 else self._neg(i, v)
            self.clauses += [[-cv, a], [-cv, p], [cv, -a, -p]]
        return cv

    def _build(self):
        m, s, f = self.m, self.s, self.formula
        add = self.clauses.append
        # axiom contents are pinned; resolvent contents get definitions
        for j in range(m + 1, s + 1):
            arcs = [self._arc(i, j) for i in range(1, j)]
            # exactly two premises: every triple has a false arc, and
            # dropping any single candidate still leaves one
            for a in range(len(arcs)):
                for b in range(a + 1, len(arcs)):
                    for c in range(b + 1, len(arcs)):
                        add([-arcs[a], -arcs[b], -arcs[c]])
            for a in range(len(arcs)):
                add([arcs[x] for x in range(len(arcs)) if x != a])
            pivots = []
            for v in self.vars:
                up = self._var("upos", j, v)
                un = self._var("uneg", j, v)
                for sign, u in ((1, up), (-1, un)):
                    terms = []
                    for i in range(1, j):
                        t = self._carry(i, j, v, sign)
                        if t is not None:
                            terms.append(t)
                    add([-u] + terms)
                    for t in terms:
                        add([-t, u])
                pv = self._var("pivot", j, v)
                pivots.append(pv)
                add([-pv, up])
                add([-pv, un])
                add([pv, -up, -un])
                pj = self._pos(j, v)
                nj = self._neg(j, v)
                add([-pj, up])
                add([-pj, -pv])
                add([pj, -up, pv])
                add([-nj, un])
                add([-nj, -pv])
                add([nj, -un, pv])
            add(pivots[:])
            for a in range(len(pivots)):
                for b in range(a + 1, len(pivots)):
                    add([-pivots[a], -pivots[b]])
        for v in self.vars:
            add([-self._pos(s, v)])
            add([-self._neg(s, v)])
        if self.flags["reuse_all_positions"]:
            self._build_reuse_everywhere()
        elif self.flags["reuse"]:
            self._build_reuse_first()
        if self.symmetry_active:
            self._build_symmetry()
        if self.flags["ordering"]:
            self._build_ordering()

    def _build_reuse_first(self):
        # axioms resolved together at the first resolvent position: one of
        # the pair is read again somewhere later
        m, s = self.m, self.s
        add = self.clauses.append
        k = m + 1
        for i in range(1, m + 1):
            for t in range(k + 1, s + 1):
                av = self._var("active", i, t)
                tail = [self._arc(i, t)]
                if t < s:
                    tail.append(self._var("active", i, t + 1))
                add([-av] + tail)
        for i in range(1, m + 1):
            for j in range(i + 1, m + 1):
                cl = [-self._arc(i, k), -self._arc(j, k)]
                if k + 1 <= s:
                    cl += [self._var("active", i, k + 1),
                           self._var("active", j, k + 1)]
                add(cl)

    def _build_reuse_everywhere(self):
        # order-free variant, sound at every resolvent position
        m, s = self.m, self.s
        add = self.clauses.append
        for k in range(m + 1, s):
            for i in range(1, m + 1):
                for j in range(i + 1, m + 1):
                    cl = [-self._arc(i, k), -self._arc(j, k)]
                    for t in range(m + 1, s + 1):
                        if t != k:
                            cl.append(self._arc(i, t))
                            cl.append(self._arc(j, t))
                    add(cl)

    def _build_symmetry(self):
        m, s = self.m, self.s
        add = self.clauses.append
        reps = {orbit[0] for orbit in iso.variable_orbits(self.formula)}
        for v in self.vars:
            add([-self._pos(s - 1, v)])
            add([-self._neg(s - 2, v)])
            if v in reps:
                add([-self._neg(s - 1, v), self._pos(s - 2, v)])
                add([self._neg(s - 1, v), -self._pos(s - 2, v)])
            else:
                add([-self._neg(s - 1, v)])
                add([-self._pos(s - 2, v)])
        add([self._arc(s - 2, s)])
        add([self._arc(s - 1, s)])
        add([-self._arc(s - 2, s - 1)])

    def _low(self, j, i):
        # some premise of j has index <= i
        if i <= 0:
            raise EncodingError("low index out of range")
        if i == 1:
            return self._arc(1, j)
        key = ("low", j, i)
        fresh = key not in self.pool
        lv = self._var(*key)
        if fresh:
            prev = self._low(j, i - 1)
            a = self._arc(i, j)
            self.clauses += [[-lv, prev, a], [-prev, lv], [-a, lv]]
        return lv

    def _build_ordering(self):
        m, s = self.m, self.s
        add = self.clauses.append
        top = s - 3 if self.symmetry_active else s - 1
        for j in range(m + 2, top + 1):
            bridge = self._arc(j - 1, j)
            for i in range(1, j - 1):
                add([bridge, -self._low(j, i), self._low(j - 1, i)])

    def decode(self, model):
        """Model back to the explicit s-step dag; inconsistencies are bugs."""
        m, s, f = self.m, self.s, self.formula
        steps = [rf.axiom(c) for c in f]
        for j in range(m + 1, s + 1):
            prem = [i for i in range(1, j) if model.get(self._arc(i, j))]
            if len(prem) != 2:
                raise EncodingError(
                    "position %d decoded with %d premises" % (j, len(prem)))
            piv = [v for v in self.vars if model.get(self._var("pivot", j, v))]
            if len(piv) != 1:
                raise EncodingError(
                    "position %d decoded with %d pivots" % (j, len(piv)))
            lits = []
            for v in self.vars:
                if model.get(self._pos(j, v)):
                    lits.append(v)
                if model.get(self._neg(j, v)):
                    lits.append(-v)
            steps.append(rf.resolvent(prem[0] - 1, prem[1] - 1, lits, piv[0]))
        dag = rf.RefutationDag(steps)
        try:
            dag.validate(axioms=f)
        except rf.ProofError as e:
            raise EncodingError("decoded refutation invalid: %s" % e) from e
        return dag


HardnessRecord = namedtuple(
    "HardnessRecord", "formula_key h witness engine flags probes")
# probes: list of per-length dicts with s, status, time and solver stats


def hardness(f, solver=None, reuse=True, reuse_all_positions=False,
             symmetry=True, ordering=False, max_steps=None,
             max_conflicts=None, timeout=None, max_vars=20):
    """Exact hardness by solving the encoding for s = m+1, m+2, ...

    Returns a HardnessRecord whose witness is the pruned refutation.
    h is None when a budget ran out before the answer was settled.
    """
    f = fm.formula(f)
    if not f:
        raise fm.FormulaError("empty formula is satisfiable")
    key = iso.canonical_key(f)
    engine = solver if solver is not None else (satgate.default_solver() or "builtin")
    flags = {"reuse": reuse, "reuse_all_positions": reuse_all_positions,
             "symmetry": symmetry, "ordering": ordering}
    if () in f:
        dag = rf.RefutationDag([rf.axiom(())])
        return HardnessRecord(key, 1, dag, engine, flags, [])
    m = len(f)
    if ht.is_hitting(f):
        if not ht.is_unsat_hitting(f):
            raise fm.FormulaError("hitting but satisfiable, nothing to refute")
    elif len(used := fm.variables(f)) <= max_vars:
        if fm.count_models(f, used, max_vars) != 0:
            raise fm.FormulaError("formula is satisfiable, nothing to refute")
    reuse_valid = (reuse or reuse_all_positions) and m > 2 and \
        fc.is_strongly_irreducible(f, max_vars)
    probes = []
    s = m + 1
    while max_steps is None or s <= max_steps:
        enc = Encoding(f, s,
                       reuse=reuse and reuse_valid and not reuse_all_positions,
                       reuse_all_positions=reuse_all_positions and reuse_valid,
                       symmetry=symmetry, ordering=ordering)
        t0 = time.monotonic()
        res = satgate.solve(enc.clauses, enc.nvars, solver=solver,
                            max_conflicts=max_conflicts, timeout=timeout)
        probe = {"s": s, "status": res.status,
                 "time": time.monotonic() - t0}
        probe.update({k: v for k, v in res.stats.items() if k != "engine"})
        probes.append(probe)
        if res.status == "UNKNOWN":
            return HardnessRecord(key, None, None, engine, flags, probes)
        if res.status == "SAT":
            witness = enc.decode(res.model).prune()
            witness.validate(axioms=f)
            return HardnessRecord(key, s, witness, engine, flags, probes)
        s += 1
    return HardnessRecord(key, None, None, engine, flags, probes)
