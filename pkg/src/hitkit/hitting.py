"""Hitting formulas and their exact model-count arithmetic.

A formula is hitting when every pair of distinct clauses clashes in at
least one variable. The falsifying sets of the clauses are then pairwise
disjoint, so the model count over n variables is exactly
2^n - sum_i 2^(n - |C_i|), and the formula is unsatisfiable precisely
when the clause sizes satisfy sum_i 2^(-|C_i|) = 1.
"""

import fractions

from . import formula as fm


class DyadicCount:
    """Exact dyadic rational num / 2**exp, canonical with num odd or zero.

    Supports the sums of 2^(-k) terms this package needs; exp may go
    negative when the value exceeds 1.
    """

    __slots__ = ("num", "exp")

    def __init__(self, num=0, exp=0):
        num = int(num)
        exp = int(exp)
        if num < 0:
            raise ValueError("negative dyadic counts are not used here")
        if num == 0:
            exp = 0
        else:
            while num % 2 == 0:
                num //= 2
                exp -= 1
        self.num = num
        self.exp = exp

    @classmethod
    def term(cls, k):
        """The value 2**(-k)."""
        return cls(1, k)

    def __add__(self, other):
        e = max(self.exp, other.exp)
        return DyadicCount(
            (self.num << (e - self.exp)) + (other.num << (e - other.exp)), e
        )

    def __eq__(self, other):
        if isinstance(other, int):
            other = DyadicCount(other, 0) if other >= 0 else None
            if other is None:
                return False
        return self.num == other.num and self.exp == other.exp

    def __lt__(self, other):
        if isinstance(other, int):
            other = DyadicCount(other, 0)
        e = max(self.exp, other.exp)
        return (self.num << (e - self.exp)) < (other.num << (e - other.exp))

    def __le__(self, other):
        return self == other or self < other

    def __hash__(self):
        return hash((self.num, self.exp))

    def to_fraction(self):
        if self.exp >= 0:
            return fractions.Fraction(self.num, 1 << self.exp)
        return fractions.Fraction(self.num << -self.exp)

    @classmethod
    def from_fraction(cls, fr):
        fr = fractions.Fraction(fr)
        den = fr.denominator
        if den & (den - 1):
            raise ValueError("%s is not dyadic" % fr)
        return cls(fr.numerator, den.bit_length() - 1)

    def __repr__(self):
        return "DyadicCount(%d, %d)" % (self.num, self.exp)


def clauses_clash(c, d):
    dset = set(d)
    return any(-l in dset for l in c)


def first_nonclashing_pair(f):
    """Indices of the first clause pair that fails to clash, or None."""
    sets = [set(c) for c in f]
    for i in range(len(f)):
        si = sets[i]
        for j in range(i + 1, len(f)):
            if not any(-l in sets[j] for l in si):
                return (i, j)
    return None


def is_hitting(f):
    return first_nonclashing_pair(f) is None


def size_sum(f):
    """sum over clauses of 2^(-|C|) as a DyadicCount."""
    total = DyadicCount()
    for c in f:
        total = total + DyadicCount.term(len(c))
    return total


def count_models_hitting(f, universe=None):
    """Exact model count of a hitting formula from clause sizes alone.

    Raises on non-hitting input; any universe size is fine since the
    count is plain integer arithmetic, not enumeration.
    """
    uni = fm._resolve_universe(f, universe)
    if not is_hitting(f):
        pair = first_nonclashing_pair(f)
        raise fm.FormulaError("clauses %d and %d do not clash" % pair)
    n = len(uni)
    return (1 << n) - sum(1 << (n - len(c)) for c in f)


def is_unsat_hitting(f):
    """Hitting and unsatisfiable, i.e. the clause sizes sum to exactly 1."""
    return is_hitting(f) and size_sum(f) == 1


def deficiency(f):
    return len(f) - len(fm.variables(f))


def polarity_counts(f):
    """dict var -> [positive occurrences, negative occurrences]."""
    occ = {}
    for c in f:
        for l in c:
            a = occ.setdefault(abs(l), [0, 0])
            a[0 if l > 0 else 1] += 1
    return occ


def is_regular(f):
    """Every variable occurs at least twice in each polarity."""
    return all(p >= 2 and q >= 2 for p, q in polarity_counts(f).values())


def singular_variables(f):
    """Variables with exactly one occurrence in some polarity."""
    return tuple(
        v for v, (p, q) in sorted(polarity_counts(f).items()) if min(p, q) == 1
    )


def singular_dp_reduce(f):
    """Eliminate singular variables by resolution until none remain.

    Always picks the smallest eligible variable. Each round replaces the
    clauses mentioning v with all non-tautological resolvents on v; on
    minimally unsatisfiable input this preserves minimal unsatisfiability
    and the deficiency.
    """
    f = fm.formula(f)
    while True:
        sing = singular_variables(f)
        if not sing:
            return f
        v = sing[0]
        with_pos = [c for c in f if v in c]
        with_neg = [c for c in f if -v in c]
        rest = [c for c in f if v not in c and -v not in c]
        for cp in with_pos:
            for cn in with_neg:
                if len(fm.clash_variables(cp, cn)) == 1:
                    rest.append(fm.resolve(cp, cn))
        f = fm.formula(rest)


def is_mu(f, max_vars=20):
    """Minimally unsatisfiable: unsatisfiable, every proper subset satisfiable.

    Decided by exact counting, so only sensible for small variable counts.
    """
    f = fm.formula(f)
    if not f:
        return False
    if fm.count_models(f, None, max_vars) != 0:
        return False
    uni = fm.variables(f)
    for i in range(len(f)):
        g = f[:i] + f[i + 1:]
        if fm.count_models(g, uni, max_vars) == 0:
            return False
    return True


def is_saturated_mu(f, max_vars=20):
    """MU and no clause can absorb any further literal without becoming satisfiable.

    Literals range over the variables of f plus one fresh variable; by
    symmetry a single fresh variable decides all of them.
    """
    f = fm.formula(f)
    if not is_mu(f, max_vars):
        return False
    used = fm.variables(f)
    fresh = (max(used) + 1) if used else 1
    lits = [v for u in used for v in (u, -u)] + [fresh, -fresh]
    uni = used + (fresh,)
    for i, c in enumerate(f):
        cset = set(c)
        for l in lits:
            if l in cset or -l in cset:
                continue
            g = f[:i] + (fm.clause(c + (l,)),) + f[i + 1:]
            if fm.count_models(fm.formula(g), uni, max_vars + 1) == 0:
                return False
    return True


def random_hitting_formula(rng, max_vars, splits, drop=0):
    """Random hitting formula built by repeated clause splitting.

    Starts from the empty clause and repeatedly replaces a random clause C
    with C+v and C+(-v) for a fresh-in-C variable v, which keeps every
    pair clashing. With drop=0 the result is unsatisfiable hitting
    (sizes sum to 1); dropping clauses keeps it hitting but satisfiable.
    """
    cls = [()]
    for _ in range(splits):
        growable = [i for i, c in enumerate(cls) if len(c) < max_vars]
        if not growable:
            break
        i = rng.choice(growable)
        c = cls.pop(i)
        used = {abs(l) for l in c}
        v = rng.choice([u for u in range(1, max_vars + 1) if u not in used])
        cls.append(c + (v,))
        cls.append(c + (-v,))
    for _ in range(min(drop, len(cls) - 1)):
        cls.pop(rng.randrange(len(cls)))
    return fm.formula(cls)
