"""SAT solving behind one interface: a builtin CDCL solver and external engines.

solve() picks an engine: an explicit command template, the HITKIT_SOLVER
environment variable, a vsat binary on PATH, or the builtin solver as the
fallback. External engines speak DIMACS in, SAT-competition output
(s/v lines, exit codes 10/20) out. Every satisfying assignment is
re-checked against the clauses before being returned.
"""

import heapq
import os
import shlex
import shutil
import subprocess
import tempfile
import time
from collections import namedtuple

SatResult = namedtuple("SatResult", "status model stats")
# status: 'SAT', 'UNSAT' or 'UNKNOWN'; model: dict var -> bool when SAT


class SolverError(Exception):
    pass


def _luby(i):
    # Luby sequence, 1-based: 1 1 2 1 1 2 4 1 1 2 1 1 2 4 8 ...
    x = i - 1
    size, power = 1, 0
    while size < x + 1:
        power += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) // 2
        power -= 1
        x %= size
    return 1 << power


class CdclSolver:
    """Conflict-driven clause learning with two watched literals.

    Unit propagation over watch lists, first-UIP learning, activity-based
    decisions with phase saving, Luby restarts, periodic forgetting of
    cold learned clauses. Fully deterministic.
    """

    RESTART_UNIT = 100

    def __init__(self, nvars, clauses):
        self.nvars = nvars
        self.assign = [None] * (nvars + 1)
        self.level = [0] * (nvars + 1)
        self.reason = [None] * (nvars + 1)
        self.phase = [False] * (nvars + 1)
        self.activity = [0.0] * (nvars + 1)
        self.var_inc = 1.0
        self.cla_inc = 1.0
        self.trail = []
        self.trail_lim = []
        self.qhead = 0
        self.watches = {}
        self.clauses = []
        self.learnts = []
        self.heap = []
        self.ok = True
        self.stats = {"conflicts": 0, "decisions": 0, "propagations": 0,
                      "restarts": 0, "learned": 0, "forgotten": 0}
        for c in clauses:
            self._add_clause([int(l) for l in c], learnt=False)
        for v in range(1, nvars + 1):
            heapq.heappush(self.heap, (0.0, v))

    def _add_clause(self, lits, learnt):
        if not self.ok:
            return None
        if not learnt:
            lits = sorted(set(lits), key=abs)
            if any(-l in lits for l in lits):
                return None
        if not lits:
            self.ok = False
            return None
        if len(lits) == 1:
            if not self._enqueue(lits[0], None):
                self.ok = False
            return None
        cla = {"lits": lits, "act": 0.0, "learnt": learnt}
        for l in lits[:2]:
            self.watches.setdefault(l, []).append(cla)
        (self.learnts if learnt else self.clauses).append(cla)
        return cla

    def _value(self, lit):
        v = self.assign[abs(lit)]
        if v is None:
            return None
        return v if lit > 0 else not v

    def _enqueue(self, lit, reason):
        val = self._value(lit)
        if val is not None:
            return val
        v = abs(lit)
        self.assign[v] = lit > 0
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)
        return True

    def _propagate(self):
        while self.qhead < len(self.trail):
            lit = self.trail[self.qhead]
            self.qhead += 1
            self.stats["propagations"] += 1
            falsified = -lit
            watching = self.watches.get(falsified, [])
            keep = []
            conflict = None
            for idx, cla in enumerate(watching):
                if conflict is not None:
                    keep.extend(watching[idx:])
                    break
                lits = cla["lits"]
                if lits is None:
                    continue  # forgotten clause, drop its watch lazily
                if lits[0] == falsified:
                    lits[0], lits[1] = lits[1], lits[0]
                if self._value(lits[0]) is True:
                    keep.append(cla)
                    continue
                moved = False
                for i in range(2, len(lits)):
                    if self._value(lits[i]) is not False:
                        lits[1], lits[i] = lits[i], lits[1]
                        self.watches.setdefault(lits[1], []).append(cla)
                        moved = True
                        break
                if moved:
                    continue
                keep.append(cla)
                if not self._enqueue(lits[0], cla):
                    conflict = cla
            self.watches[falsified] = keep
            if conflict is not None:
                return conflict
        return None

    def _bump_var(self, v):
        self.activity[v] += self.var_inc
        if self.activity[v] > 1e100:
            for u in range(1, self.nvars + 1):
                self.activity[u] *= 1e-100
            self.var_inc *= 1e-100
        heapq.heappush(self.heap, (-self.activity[v], v))

    def _bump_clause(self, cla):
        cla["act"] += self.cla_inc
        if cla["act"] > 1e100:
            for c in self.learnts:
                c["act"] *= 1e-100
            self.cla_inc *= 1e-100

    def _analyze(self, conflict):
        learnt = []
        seen = [False] * (self.nvars + 1)
        counter = 0
        lit = None  # asserted literal whose reason is being expanded
        reason = conflict
        idx = len(self.trail) - 1
        btlevel = 0
        while True:
            self._bump_clause(reason)
            for q in reason["lits"]:
                if lit is not None and q == lit:
                    continue
                v = abs(q)
                if not seen[v] and self.level[v] > 0:
                    seen[v] = True
                    self._bump_var(v)
                    if self.level[v] >= len(self.trail_lim):
                        counter += 1
                    else:
                        learnt.append(q)
                        btlevel = max(btlevel, self.level[v])
            while True:
                lit = self.trail[idx]
                idx -= 1
                if seen[abs(lit)]:
                    break
            counter -= 1
            seen[abs(lit)] = False
            if counter == 0:
                break
            reason = self.reason[abs(lit)]
        learnt.insert(0, -lit)
        if len(learnt) == 1:
            btlevel = 0
        else:
            # second watch must sit at the backjump level
            mi = max(range(1, len(learnt)), key=lambda i: self.level[abs(learnt[i])])
            learnt[1], learnt[mi] = learnt[mi], learnt[1]
        return learnt, btlevel

    def _backtrack(self, blevel):
        while len(self.trail_lim) > blevel:
            mark = self.trail_lim.pop()
            while len(self.trail) > mark:
                lit = self.trail.pop()
                v = abs(lit)
                self.phase[v] = self.assign[v]
                self.assign[v] = None
                self.reason[v] = None
                heapq.heappush(self.heap, (-self.activity[v], v))
        self.qhead = len(self.trail)

    def _decide(self):
        while self.heap:
            act, v = heapq.heappop(self.heap)
            if self.assign[v] is None and -act == self.activity[v]:
                return v
        for v in range(1, self.nvars + 1):
            if self.assign[v] is None:
                return v
        return None

    def _reduce_db(self):
        self.learnts.sort(key=lambda c: c["act"], reverse=True)
        keep = len(self.learnts) // 2
        locked = {id(self.reason[abs(l)]) for l in self.trail
                  if self.reason[abs(l)] is not None}
        kept = []
        for i, cla in enumerate(self.learnts):
            if i < keep or len(cla["lits"]) <= 2 or id(cla) in locked:
                kept.append(cla)
            else:
                cla["lits"] = None
                self.stats["forgotten"] += 1
        self.learnts = kept

    def solve(self, max_conflicts=None, deadline=None):
        if not self.ok:
            return SatResult("UNSAT", None, dict(self.stats))
        conflict = self._propagate()
        if conflict is not None:
            return SatResult("UNSAT", None, dict(self.stats))
        restart_round = 0
        budget = _luby(restart_round + 1) * self.RESTART_UNIT
        since_restart = 0
        learnt_cap = max(4000, len(self.clauses) * 2)
        while True:
            if deadline is not None and time.monotonic() > deadline:
                return SatResult("UNKNOWN", None, dict(self.stats))
            conflict = self._propagate()
            if conflict is not None:
                self.stats["conflicts"] += 1
                since_restart += 1
                if max_conflicts is not None and self.stats["conflicts"] > max_conflicts:
                    return SatResult("UNKNOWN", None, dict(self.stats))
                if not self.trail_lim:
                    return SatResult("UNSAT", None, dict(self.stats))
                learnt, btlevel = self._analyze(conflict)
                self._backtrack(btlevel)
                self.var_inc /= 0.95
                self.cla_inc /= 0.999
                if len(learnt) == 1:
                    if not self._enqueue(learnt[0], None):
                        return SatResult("UNSAT", None, dict(self.stats))
                else:
                    cla = self._add_clause(learnt, learnt=True)
                    self.stats["learned"] += 1
                    self._enqueue(learnt[0], cla)
                if len(self.learnts) > learnt_cap:
                    self._reduce_db()
                    learnt_cap += learnt_cap // 10
                continue
            if since_restart >= budget:
                self.stats["restarts"] += 1
                restart_round += 1
                since_restart = 0
                budget = _luby(restart_round + 1) * self.RESTART_UNIT
                self._backtrack(0)
                continue
            v = self._decide()
            if v is None:
                model = {u: bool(self.assign[u]) for u in range(1, self.nvars + 1)}
                return SatResult("SAT", model, dict(self.stats))
            self.stats["decisions"] += 1
            self.trail_lim.append(len(self.trail))
            self._enqueue(v if self.phase[v] else -v, None)


def solve_builtin(clauses, nvars, max_conflicts=None, timeout=None):
    deadline = time.monotonic() + timeout if timeout else None
    t0 = time.monotonic()
    res = CdclSolver(nvars, clauses).solve(max_conflicts, deadline)
    stats = dict(res.stats)
    stats["time"] = time.monotonic() - t0
    stats["engine"] = "builtin"
    return SatResult(res.status, res.model, stats)


def _dimacs_bytes(clauses, nvars):
    out = ["p cnf %d %d" % (nvars, len(clauses))]
    for c in clauses:
        out.append(" ".join(str(l) for l in c) + " 0")
    return ("\n".join(out) + "\n").encode()


def solve_external(clauses, nvars, command, timeout=None):
    """Run an external DIMACS solver given as a command template.

    The template is split shell-style; a {cnf} placeholder is replaced by
    the instance path, or the path is appended when no placeholder exists.
    """
    parts = shlex.split(command)
    fd, path = tempfile.mkstemp(suffix=".cnf", prefix="hitkit_")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(_dimacs_bytes(clauses, nvars))
        if any("{cnf}" in p for p in parts):
            cmd = [p.replace("{cnf}", path) for p in parts]
        else:
            cmd = parts + [path]
        t0 = time.monotonic()
        try:
            proc = subprocess.run(cmd, capture_output=True, text=True,
                                  timeout=timeout)
        except subprocess.TimeoutExpired:
            return SatResult("UNKNOWN", None,
                             {"engine": command, "time": timeout, "timeout": True})
        except OSError as e:
            raise SolverError("cannot run %r: %s" % (command, e)) from e
        elapsed = time.monotonic() - t0
        status = None
        model_lits = []
        for line in proc.stdout.splitlines():
            if line.startswith("s "):
                tag = line[2:].strip()
                if tag == "SATISFIABLE":
                    status = "SAT"
                elif tag == "UNSATISFIABLE":
                    status = "UNSAT"
            elif line.startswith("v "):
                model_lits.extend(int(t) for t in line[2:].split())
        if status is None:
            if proc.returncode == 10:
                status = "SAT"
            elif proc.returncode == 20:
                status = "UNSAT"
            else:
                raise SolverError(
                    "solver %r gave no verdict (exit %d): %s"
                    % (command, proc.returncode, proc.stderr.strip()[:500]))
        model = None
        if status == "SAT":
            model = {v: False for v in range(1, nvars + 1)}
            for l in model_lits:
                if l != 0 and abs(l) <= nvars:
                    model[abs(l)] = l > 0
            if not model_lits:
                raise SolverError("solver %r reported SAT without a model" % command)
        stats = {"engine": command, "time": elapsed}
        return SatResult(status, model, stats)
    finally:
        os.unlink(path)


def default_solver():
    """The external command to use by default, or None for the builtin."""
    env = os.environ.get("HITKIT_SOLVER")
    if env:
        return env
    path = shutil.which("vsat")
    if path:
        return path
    return None


def verify_model(clauses, model):
    for c in clauses:
        if not any(model.get(abs(l), False) == (l > 0) for l in c):
            return False
    return True


def solve(clauses, nvars, solver=None, max_conflicts=None, timeout=None):
    """Dispatch to the chosen engine and sanity-check any model returned.

    solver: None picks the default external engine when one is available,
    'builtin' forces the internal solver, anything else is an external
    command template.
    """
    clauses = [list(c) for c in clauses]
    if solver is None:
        solver = default_solver() or "builtin"
    if solver == "builtin":
        res = solve_builtin(clauses, nvars, max_conflicts, timeout)
    else:
        res = solve_external(clauses, nvars, solver, timeout)
    if res.status == "SAT":
        if res.model is None or not verify_model(clauses, res.model):
            raise SolverError("engine %r returned a bad model" % solver)
    return res
