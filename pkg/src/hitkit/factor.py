"""Factors, clause interpolants, and the irreducibility notions built on them.

A subset S of a formula is a factor when S is logically equivalent to a
single clause; that clause can always be taken to be the intersection of
S (its basis). A formula is irreducible when no proper subset with more
than one clause is a factor. The stronger variant asks for clause
interpolants: S is a pseudo-factor when some clause C satisfies
S entails C and C together with the rest of the formula is unsatisfiable.
"""

import itertools
from collections import namedtuple

from . import formula as fm
from . import hitting as ht
from . import refutation as rf

FactorWitness = namedtuple("FactorWitness", "indices basis")


def intersection_clause(clauses):
    clauses = list(clauses)
    if not clauses:
        raise fm.FormulaError("intersection of no clauses")
    common = set(clauses[0])
    for c in clauses[1:]:
        common &= set(c)
    return tuple(sorted(common, key=lambda l: (abs(l), l < 0)))


def is_factor(host, subset, max_vars=20):
    """Is the given subset of host equivalent to a single clause?

    The candidate clause is the basis (the intersection); the basis always
    entails every clause of the subset, so only the converse needs
    deciding. On hitting subsets that is clause-size arithmetic; otherwise
    it falls back to exact counting.
    """
    host = fm.formula(host)
    sub = fm.formula(subset)
    hostset = set(host)
    for c in sub:
        if c not in hostset:
            raise fm.FormulaError("subset clause %s not in host" % (c,))
    basis = intersection_clause(sub)
    if ht.is_hitting(sub):
        # models of the subset are exactly the non-models of the basis
        # complement iff the sizes satisfy sum 2^-|D| = 2^-|basis|
        return ht.size_sum(sub) == ht.DyadicCount.term(len(basis))
    return fm.entails_clause(sub, basis, max_vars)


def factor_witness(host, subset, max_vars=20):
    host = fm.formula(host)
    sub = fm.formula(subset)
    if not is_factor(host, sub, max_vars):
        return None
    idx = tuple(i for i, c in enumerate(host) if c in set(sub))
    return FactorWitness(idx, intersection_clause(sub))


def closed_subsets(f):
    """All subsets of the form {D in f : D contains B} with at least 2 clauses.

    B ranges over the intersection semilattice of f's clauses. Every
    factor's closure is one of these, with the same basis, so for factor
    questions they are the only subsets that need checking.
    """
    f = fm.formula(f)
    sets = [frozenset(c) for c in f]
    seen = set()
    work = list(sets)
    bases = []
    while work:
        b = work.pop()
        if b in seen:
            continue
        seen.add(b)
        bases.append(b)
        for s in sets:
            nb = b & s
            if nb not in seen:
                work.append(nb)
    out = {}
    for b in seen:
        members = tuple(i for i, s in enumerate(sets) if s >= b)
        if len(members) >= 2:
            out.setdefault(members, b)
    result = []
    for members, b in sorted(out.items()):
        basis = intersection_clause([f[i] for i in members])
        result.append(FactorWitness(members, basis))
    return result


def enumerate_factors(f, proper=True, max_vars=20):
    """Closed factors of f as FactorWitness tuples.

    Non-closed factors exist too, but each is a subset of a closed factor
    with the same basis, so these witnesses carry all the information.
    """
    f = fm.formula(f)
    m = len(f)
    out = []
    for w in closed_subsets(f):
        if proper and len(w.indices) == m:
            continue
        if is_factor(f, [f[i] for i in w.indices], max_vars):
            out.append(w)
    return out


def is_irreducible(f, max_vars=20):
    """No factor with strictly between 1 and m clauses.

    Satisfiable factors are caught through their closures; unsatisfiable
    proper subsets (factors with empty basis) are caught by dropping one
    clause at a time.
    """
    f = fm.formula(f)
    m = len(f)
    if m <= 2:
        return True
    for w in closed_subsets(f):
        if 1 < len(w.indices) < m and is_factor(f, [f[i] for i in w.indices], max_vars):
            return False
    if fm.count_models(f, None, max_vars) == 0:
        uni = fm.variables(f)
        for i in range(m):
            if fm.count_models(f[:i] + f[i + 1:], uni, max_vars) == 0:
                return False
    return True


def clause_interpolant(s_part, t_part, max_vars=20):
    """A clause C with s_part entailing C and C incompatible with t_part.

    Returns None when no such clause exists. Only variables of the two
    parts are considered, which loses nothing: if any separating clause
    exists, the complement of the smallest subcube containing the models
    of t_part is one, and it uses only those variables.
    """
    s = fm.formula(s_part)
    t = fm.formula(t_part)
    if not s or not t:
        raise fm.FormulaError("interpolant needs two nonempty parts")
    uni = tuple(sorted(set(fm.variables(s)) | set(fm.variables(t))))
    n = len(uni)
    if n > max_vars:
        raise fm.FormulaError("interpolant over %d variables exceeds max_vars" % n)
    full = (1 << (1 << n)) - 1
    bit = {v: i for i, v in enumerate(uni)}
    masks = [fm.literal_mask(i, n) for i in range(n)]

    def models(g):
        acc = full
        for c in g:
            cm = 0
            for l in c:
                mk = masks[bit[abs(l)]]
                cm |= mk if l > 0 else full ^ mk
            acc &= cm
        return acc

    mod_s = models(s)
    if mod_s == 0:
        return ()
    mod_t = models(t)
    if mod_t == 0:
        return min(s, key=lambda c: (len(c), c))
    lits = []
    box = full
    for v in uni:
        mk = masks[bit[v]]
        if mod_t & mk == mod_t:
            lits.append(-v)  # v true throughout Mod(T); C blocks the box
            box &= mk
        elif mod_t & mk == 0:
            lits.append(v)
            box &= full ^ mk
    if mod_s & box:
        return None
    return fm.clause(lits)


def pseudo_factors(f, max_vars=20):
    """Subset sizes strictly between 1 and m admitting a clause interpolant.

    Yields (indices, interpolant) pairs. Every factor is also a
    pseudo-factor, with its basis as the interpolant.
    """
    f = fm.formula(f)
    m = len(f)
    for r in range(2, m):
        for idx in itertools.combinations(range(m), r):
            s = [f[i] for i in idx]
            t = [f[i] for i in range(m) if i not in idx]
            c = clause_interpolant(s, t, max_vars)
            if c is not None:
                yield idx, c


def is_strongly_irreducible(f, max_vars=20):
    """No pseudo-factor with strictly between 1 and m clauses."""
    for _ in pseudo_factors(f, max_vars):
        return False
    return True


def build_decomposition_refutation(host, subset, inner, outer):
    """Join two refutations through a subset equivalent to a clause.

    subset must be clauses of host whose intersection is the clause C.
    inner refutes the subset with C's literals removed from every clause;
    outer refutes {C} plus the rest of host. The result refutes host: the
    inner proof is lifted by adding C back everywhere (its root becomes
    exactly C) and the outer proof's C axioms are rewired to that root.
    """
    host = fm.formula(host)
    sub = fm.formula(subset)
    hostset = set(host)
    for c in sub:
        if c not in hostset:
            raise fm.FormulaError("subset clause %s not in host" % (c,))
    basis = intersection_clause(sub)
    bvars = {abs(l) for l in basis}
    reduced = fm.formula(tuple(l for l in d if l not in basis) for d in sub)
    inner.validate(axioms=reduced)
    rest = tuple(c for c in host if c not in set(sub))
    outer.validate(axioms=fm.formula((basis,) + rest))

    lifted = []
    for st in inner.steps:
        if st.premises is not None and st.pivot in bvars:
            raise rf.ProofError("inner refutation resolves on a basis variable")
        lifted.append(rf.Step(st.premises, st.pivot,
                              fm.clause(st.clause + basis)))
    root = len(lifted) - 1
    if lifted[root].clause != basis:
        raise rf.ProofError("lifted inner refutation does not end in the basis")

    remap = {}
    steps = list(lifted)
    for k, st in enumerate(outer.steps):
        if st.premises is None and st.clause == basis:
            remap[k] = root
            continue
        remap[k] = len(steps)
        if st.premises is None:
            steps.append(st)
        else:
            i, j = st.premises
            steps.append(rf.Step((remap[i], remap[j]), st.pivot, st.clause))
    dag = rf.RefutationDag(steps)
    dag.validate(axioms=host)
    return dag
