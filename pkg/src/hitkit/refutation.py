"""Resolution refutations as explicit dags, plus a brute-force shortest-proof search.

A refutation is a sequence of steps; each step is either an axiom or the
resolvent of two earlier steps. Hardness of a formula is the number of
steps (axioms included) in a shortest refutation.
"""

from collections import namedtuple

from . import formula as fm


class ProofError(Exception):
    def __init__(self, msg, step=None):
        if step is not None:
            msg = "step %d: %s" % (step + 1, msg)
        super().__init__(msg)
        self.step = step


Step = namedtuple("Step", "premises pivot clause")
# premises None for axioms, else (i, j) 0-based; pivot is the resolved variable


def axiom(c):
    return Step(None, None, fm.clause(c))


def resolvent(i, j, c, pivot):
    return Step((i, j), pivot, fm.clause(c))


class RefutationDag:
    def __init__(self, steps):
        self.steps = tuple(steps)

    def __len__(self):
        return len(self.steps)

    def __eq__(self, other):
        return isinstance(other, RefutationDag) and self.steps == other.steps

    def clauses(self):
        return tuple(s.clause for s in self.steps)

    def axioms(self):
        return tuple(s.clause for s in self.steps if s.premises is None)

    def validate(self, axioms=None, require_empty=True):
        """Check every step; raises ProofError with the offending step index.

        axioms, when given, is the formula the axiom steps must come from.
        """
        allowed = None if axioms is None else set(fm.formula(axioms))
        if not self.steps:
            raise ProofError("empty refutation")
        for k, st in enumerate(self.steps):
            if st.premises is None:
                if st.clause != fm.clause(st.clause):
                    raise ProofError("axiom clause not normalized", k)
                if allowed is not None and st.clause not in allowed:
                    raise ProofError(
                        "axiom %s not in the formula" % (st.clause,), k)
            else:
                i, j = st.premises
                if not (0 <= i < k and 0 <= j < k and i != j):
                    raise ProofError("bad premise indices (%d, %d)" % (i, j), k)
                ci, cj = self.steps[i].clause, self.steps[j].clause
                clash = fm.clash_variables(ci, cj)
                if len(clash) != 1:
                    raise ProofError(
                        "premises clash in %d variables" % len(clash), k)
                if st.pivot != clash[0]:
                    raise ProofError(
                        "pivot %s but premises clash on %d" % (st.pivot, clash[0]), k)
                if fm.resolve(ci, cj) != st.clause:
                    raise ProofError(
                        "stored clause %s is not the resolvent %s"
                        % (st.clause, fm.resolve(ci, cj)), k)
        if require_empty and self.steps[-1].clause != ():
            raise ProofError("final clause is not empty", len(self.steps) - 1)

    def used_cone(self):
        """Indices of steps reachable backwards from the final step."""
        seen = set()
        stack = [len(self.steps) - 1]
        while stack:
            k = stack.pop()
            if k in seen:
                continue
            seen.add(k)
            prem = self.steps[k].premises
            if prem:
                stack.extend(prem)
        return seen

    def prune(self):
        """Drop steps the final step does not depend on, keeping order."""
        keep = sorted(self.used_cone())
        remap = {old: new for new, old in enumerate(keep)}
        out = []
        for old in keep:
            st = self.steps[old]
            if st.premises is None:
                out.append(st)
            else:
                i, j = st.premises
                out.append(Step((remap[i], remap[j]), st.pivot, st.clause))
        return RefutationDag(out)

    def premise_use_counts(self):
        uses = [0] * len(self.steps)
        for st in self.steps:
            if st.premises:
                for p in st.premises:
                    uses[p] += 1
        return uses

    def is_read_once(self):
        """No step feeds more than one resolution."""
        return all(u <= 1 for u in self.premise_use_counts())

    def to_text(self):
        """One step per line, 1-based premise indices, 0-terminated literal lists.

        A <lits> 0
        R <i> <j> <pivot> <lits> 0
        """
        lines = []
        for st in self.steps:
            lits = " ".join(str(l) for l in st.clause)
            body = (lits + " 0") if lits else "0"
            if st.premises is None:
                lines.append("A " + body)
            else:
                lines.append("R %d %d %d %s" % (st.premises[0] + 1,
                                                st.premises[1] + 1,
                                                st.pivot, body))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        steps = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("c"):
                continue
            parts = line.split()
            try:
                if parts[0] == "A":
                    nums = [int(t) for t in parts[1:]]
                    if not nums or nums[-1] != 0:
                        raise ValueError("missing terminating 0")
                    steps.append(axiom(nums[:-1]))
                elif parts[0] == "R":
                    nums = [int(t) for t in parts[1:]]
                    if len(nums) < 4 or nums[-1] != 0:
                        raise ValueError("missing fields or terminating 0")
                    i, j, piv = nums[0], nums[1], nums[2]
                    steps.append(resolvent(i - 1, j - 1, nums[3:-1], piv))
                else:
                    raise ValueError("unknown step kind %r" % parts[0])
            except (ValueError, fm.FormulaError) as e:
                raise ProofError("line %d: %s" % (lineno, e)) from e
        return cls(steps)


def resolution_closure(f):
    """All clauses derivable from f by resolution, including f itself."""
    closure = set(f)
    work = list(f)
    while work:
        c = work.pop()
        for d in list(closure):
            if len(fm.clash_variables(c, d)) == 1:
                r = fm.resolve(c, d)
                if r not in closure:
                    closure.add(r)
                    work.append(r)
    return closure


def shortest_refutation(f, max_steps=None, assume_mu=False):
    """Shortest resolution refutation by iterative-deepening search.

    Exhaustive, so only for small formulas. assume_mu turns on the pruning
    bound that every axiom must still be placed, which is valid exactly
    when f is minimally unsatisfiable. Returns None when f has no
    refutation within max_steps (or none at all).

    The search explores one canonical step order per dag: the axioms used
    come first, in formula order, then the resolvents. Failure states are
    memoized by (clause set, phase) with the budget headroom they failed
    at, which is sound because the available moves depend only on those.
    """
    f = fm.formula(f)
    if not f:
        return None
    if () in f:
        return RefutationDag([axiom(())])
    m = len(f)
    closure = resolution_closure(f)
    if () not in closure:
        return None
    cap = len(closure) + 1
    limit = cap if max_steps is None else min(max_steps, cap)
    order = {c: i for i, c in enumerate(f)}
    best = [None]
    failed = {}

    def dfs(seq, have, budget):
        missing = sum(1 for a in f if a not in have) if assume_mu else 0
        if len(seq) + missing + 1 > budget:
            return False
        units = {}
        for k, st in enumerate(seq):
            if len(st.clause) == 1:
                units[st.clause[0]] = k
        for lit, k in units.items():
            if -lit in units:
                i, j = sorted((units[-lit], k))
                seq.append(resolvent(i, j, (), abs(lit)))
                best[0] = RefutationDag(list(seq))
                seq.pop()
                return True
        axiom_phase = all(st.premises is None for st in seq)
        key = (frozenset(have), axiom_phase)
        rem = budget - len(seq)
        if failed.get(key, -1) >= rem:
            return False
        if axiom_phase:
            last = order[seq[-1].clause] if seq else -1
            for idx in range(last + 1, m):
                a = f[idx]
                seq.append(axiom(a))
                have.add(a)
                ok = dfs(seq, have, budget)
                seq.pop()
                have.discard(a)
                if ok:
                    return True
        n = len(seq)
        for i in range(n):
            ci = seq[i].clause
            for j in range(i + 1, n):
                clash = fm.clash_variables(ci, seq[j].clause)
                if len(clash) != 1:
                    continue
                r = fm.resolve(ci, seq[j].clause)
                if r in have:
                    continue
                seq.append(resolvent(i, j, r, clash[0]))
                have.add(r)
                ok = dfs(seq, have, budget)
                seq.pop()
                have.discard(r)
                if ok:
                    return True
        if failed.get(key, -1) < rem:
            failed[key] = rem
        return False

    start = max(3, 2 * m - 1) if assume_mu else 3
    for budget in range(start, limit + 1):
        if dfs([], set(), budget):
            dag = best[0]
            dag.validate(axioms=f)
            return dag
    return None


def hardness_bruteforce(f, max_steps=None, assume_mu=False):
    dag = shortest_refutation(f, max_steps, assume_mu)
    return None if dag is None else len(dag)
