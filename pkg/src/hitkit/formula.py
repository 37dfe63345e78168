"""Core CNF data types: clauses, formulas, assignments, exact model counts.

Literals are nonzero ints (DIMACS style), a clause is a sorted tuple of
literals, a formula is a sorted tuple of clauses. Both constructors
normalize, so equal objects mean equal formulas.
"""

import itertools


class FormulaError(ValueError):
    pass


def clause(lits):
    """Normalize a clause: dedupe, sort by (variable, polarity).

    Raises FormulaError on a 0 literal or a complementary pair (clauses
    here are never tautological; resolvents drop the pivot pair first).
    """
    out = set()
    for l in lits:
        l = int(l)
        if l == 0:
            raise FormulaError("literal 0 is not allowed")
        if -l in out:
            raise FormulaError("complementary pair %d/%d in clause" % (l, -l))
        out.add(l)
    return tuple(sorted(out, key=lambda l: (abs(l), l < 0)))


def formula(clauses):
    """Normalize a formula: normalize each clause, dedupe, sort by (size, clause)."""
    cs = {clause(c) for c in clauses}
    return tuple(sorted(cs, key=lambda c: (len(c), c)))


def variables(f):
    vs = set()
    for c in f:
        for l in c:
            vs.add(abs(l))
    return tuple(sorted(vs))


def clause_variables(c):
    return tuple(sorted(abs(l) for l in c))


def clash_variables(c, d):
    """Variables occurring with opposite signs in c and d."""
    dset = set(d)
    return tuple(sorted(abs(l) for l in c if -l in dset))


def resolve(c, d):
    """Resolvent of two clauses clashing in exactly one variable.

    Raises FormulaError when they clash in zero or several variables
    (the latter would produce a tautology).
    """
    piv = clash_variables(c, d)
    if len(piv) != 1:
        raise FormulaError("clauses clash in %d variables, need exactly 1" % len(piv))
    v = piv[0]
    merged = {l for l in c if abs(l) != v} | {l for l in d if abs(l) != v}
    return tuple(sorted(merged, key=lambda l: (abs(l), l < 0)))


def satisfies(assignment, c):
    """assignment: dict var -> bool. True when some literal of c holds."""
    for l in c:
        val = assignment.get(abs(l))
        if val is None:
            continue
        if val == (l > 0):
            return True
    return False


def evaluate(assignment, f):
    return all(satisfies(assignment, c) for c in f)


def restrict(f, assignment):
    """Apply a partial assignment: drop satisfied clauses, shrink the rest.

    May produce the empty clause. Result is normalized.
    """
    out = []
    for c in f:
        if satisfies(assignment, c):
            continue
        out.append(tuple(l for l in c if abs(l) not in assignment))
    return formula(out)


def _resolve_universe(f, universe):
    if universe is None:
        return variables(f)
    if isinstance(universe, int):
        uni = tuple(range(1, universe + 1))
    else:
        uni = tuple(sorted(set(universe)))
    missing = set(variables(f)) - set(uni)
    if missing:
        raise FormulaError("clause variables %s outside universe" % sorted(missing))
    return uni


def literal_mask(bit, nbits):
    """Bitmask over 2**nbits assignments where the variable at position bit is true."""
    period = 1 << (bit + 1)
    unit = ((1 << (1 << bit)) - 1) << (1 << bit)
    reps = 1 << (nbits - bit - 1)
    # 1 at positions 0, period, 2*period, ... so unit * rep tiles the pattern
    rep = ((1 << (period * reps)) - 1) // ((1 << period) - 1)
    return unit * rep


def count_models(f, universe=None, max_vars=20):
    """Exact model count of f over the given variable universe.

    universe is an int n (meaning variables 1..n), an iterable of
    variables, or None for the variables actually used. Works on any CNF;
    cost is O(2^n) bit operations, refused above max_vars variables.
    """
    uni = _resolve_universe(f, universe)
    n = len(uni)
    if n > max_vars:
        raise FormulaError("universe of %d variables exceeds max_vars=%d" % (n, max_vars))
    if () in f:
        return 0
    full = (1 << (1 << n)) - 1
    bit = {v: i for i, v in enumerate(uni)}
    pos = [literal_mask(i, n) for i in range(n)]
    acc = full
    for c in f:
        cm = 0
        for l in c:
            m = pos[bit[abs(l)]]
            cm |= m if l > 0 else full ^ m
        acc &= cm
        if acc == 0:
            return 0
    return acc.bit_count()


def is_satisfiable_bruteforce(f, universe=None, max_vars=20):
    return () not in f and (not f or count_models(f, universe, max_vars) > 0)


def entails_clause(f, c, max_vars=20):
    """F entails clause c, decided by counting models of F with c falsified."""
    fixed = {}
    for l in clause(c):
        fixed[abs(l)] = l < 0
    g = restrict(f, fixed)
    uni = set(variables(f)) | set(abs(l) for l in c)
    rest = sorted(uni - set(fixed))
    return count_models(g, rest, max_vars) == 0


def all_assignments(uni):
    uni = tuple(uni)
    for bits in itertools.product((False, True), repeat=len(uni)):
        yield dict(zip(uni, bits))


def to_dimacs(f, universe=None, comment=None):
    """DIMACS text plus the variable map used (original var -> dimacs index)."""
    uni = _resolve_universe(f, universe)
    varmap = {v: i + 1 for i, v in enumerate(uni)}
    lines = []
    if comment:
        for ln in str(comment).splitlines():
            lines.append("c " + ln)
    lines.append("p cnf %d %d" % (len(uni), len(f)))
    for c in f:
        lines.append(" ".join(str(varmap[abs(l)] * (1 if l > 0 else -1)) for l in c) + " 0")
    return "\n".join(lines) + "\n", varmap


def from_dimacs(text):
    """Parse DIMACS CNF. Returns (formula, declared_nvars)."""
    nvars = None
    ncl = None
    cls = []
    cur = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormulaError("bad problem line: %r" % line)
            nvars, ncl = int(parts[2]), int(parts[3])
            continue
        for tok in line.split():
            l = int(tok)
            if l == 0:
                cls.append(clause(cur))
                cur = []
            else:
                cur.append(l)
    if cur:
        raise FormulaError("trailing clause without terminating 0")
    if nvars is None:
        raise FormulaError("missing problem line")
    if ncl is not None and ncl != len(cls):
        raise FormulaError("problem line declares %d clauses, found %d" % (ncl, len(cls)))
    f = formula(cls)
    used = variables(f)
    if used and used[-1] > nvars:
        raise FormulaError("literal exceeds declared variable count")
    return f, nvars


def parse_clause(text):
    """Parse a clause like '1 -2 3'."""
    return clause(int(t) for t in text.split())


def format_clause(c):
    return " ".join(str(l) for l in c)
