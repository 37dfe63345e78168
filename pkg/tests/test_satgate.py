import itertools
import os
import random
import stat

import pytest

from hitkit import formula as fm, satgate as sg


def brute_sat(clauses, nvars):
    for bits in itertools.product((False, True), repeat=nvars):
        model = dict(zip(range(1, nvars + 1), bits))
        if all(any(model[abs(l)] == (l > 0) for l in c) for c in clauses):
            return True
    return False


def test_luby_sequence():
    want = [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]
    assert [sg._luby(i) for i in range(1, 16)] == want


def test_builtin_trivial():
    res = sg.solve([], 0, solver="builtin")
    assert res.status == "SAT"
    res = sg.solve([[]], 0, solver="builtin")
    assert res.status == "UNSAT"
    res = sg.solve([[1], [-1]], 1, solver="builtin")
    assert res.status == "UNSAT"


def test_builtin_model_is_checked():
    res = sg.solve([[1, 2], [-1, 2], [-2, 3]], 3, solver="builtin")
    assert res.status == "SAT"
    assert sg.verify_model([[1, 2], [-1, 2], [-2, 3]], res.model)
    assert res.stats["engine"] == "builtin"
    assert res.stats["time"] >= 0


def test_builtin_matches_bruteforce_random():
    rng = random.Random(3)
    for _ in range(200):
        nvars = rng.randrange(1, 7)
        ncl = rng.randrange(0, 18)
        clauses = []
        for _ in range(ncl):
            k = rng.randrange(1, 4)
            vs = rng.sample(range(1, nvars + 1), min(k, nvars))
            clauses.append([v * rng.choice((1, -1)) for v in vs])
        want = brute_sat(clauses, nvars)
        res = sg.solve(clauses, nvars, solver="builtin")
        assert res.status == ("SAT" if want else "UNSAT")


def test_builtin_conflict_budget_gives_unknown():
    # a formula the solver cannot finish in one conflict
    f = fm.formula([(1, 2, 3), (-1, -2, 3), (1, -2, -3), (-1, 2, -3),
                    (1, 2, -3), (-1, -2, -3), (1, -2, 3), (-1, 2, 3)])
    res = sg.solve_builtin([list(c) for c in f], 3, max_conflicts=1)
    assert res.status in ("UNSAT", "UNKNOWN")  # tiny instance may still finish
    res = sg.solve_builtin([[1, 2], [1, -2]] * 1, 2, max_conflicts=0)
    assert res.status in ("SAT", "UNKNOWN")


def stub_solver(tmp_path, name, body):
    path = tmp_path / name
    path.write_text("#!/bin/sh\n" + body)
    path.chmod(path.stat().st_mode | stat.S_IEXEC)
    return str(path)


def test_external_sat_with_model(tmp_path):
    cmd = stub_solver(tmp_path, "oksat",
                      'echo "c comment"\necho "s SATISFIABLE"\n'
                      'echo "v 1 -2 0"\nexit 10\n')
    res = sg.solve([[1], [-2]], 2, solver=cmd)
    assert res.status == "SAT"
    assert res.model == {1: True, 2: False}


def test_external_unsat_by_exit_code(tmp_path):
    cmd = stub_solver(tmp_path, "exitonly", "exit 20\n")
    res = sg.solve([[1], [-1]], 1, solver=cmd)
    assert res.status == "UNSAT"


def test_external_cnf_placeholder(tmp_path):
    cmd = stub_solver(tmp_path, "reader",
                      'grep -q "^p cnf 2 2" "$1" || exit 1\n'
                      'echo "s SATISFIABLE"\necho "v 1 2 0"\n')
    res = sg.solve([[1], [2]], 2, solver=cmd + " {cnf}")
    assert res.status == "SAT"


def test_external_lying_sat_is_rejected(tmp_path):
    cmd = stub_solver(tmp_path, "liar",
                      'echo "s SATISFIABLE"\necho "v 1 0"\nexit 10\n')
    with pytest.raises(sg.SolverError, match="bad model"):
        sg.solve([[-1]], 1, solver=cmd)


def test_external_sat_without_model_is_rejected(tmp_path):
    cmd = stub_solver(tmp_path, "silent", 'echo "s SATISFIABLE"\nexit 10\n')
    with pytest.raises(sg.SolverError, match="without a model"):
        sg.solve([[1]], 1, solver=cmd)


def test_external_no_verdict_is_an_error(tmp_path):
    cmd = stub_solver(tmp_path, "mute", 'echo "hello"\nexit 3\n')
    with pytest.raises(sg.SolverError, match="no verdict"):
        sg.solve([[1]], 1, solver=cmd)


def test_external_missing_binary_is_an_error(tmp_path):
    with pytest.raises(sg.SolverError, match="cannot run"):
        sg.solve([[1]], 1, solver=str(tmp_path / "nosuch"))


def test_default_solver_env_override(tmp_path, monkeypatch):
    cmd = stub_solver(tmp_path, "envsat",
                      'echo "s SATISFIABLE"\necho "v 1 0"\nexit 10\n')
    monkeypatch.setenv("HITKIT_SOLVER", cmd)
    assert sg.default_solver() == cmd
    res = sg.solve([[1]], 1)
    assert res.status == "SAT"
    assert res.stats["engine"] == cmd


def test_default_solver_falls_back_to_builtin(monkeypatch):
    monkeypatch.delenv("HITKIT_SOLVER", raising=False)
    monkeypatch.setenv("PATH", "/nonexistent")
    assert sg.default_solver() is None
    res = sg.solve([[1], [-1]], 1)
    assert res.status == "UNSAT"
    assert res.stats["engine"] == "builtin"
