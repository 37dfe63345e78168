import csv
import io
import json
import os

import pytest

from hitkit import catalog as ct, cli, formula as fm, refutation as rf

F24 = fm.formula([(1, 2), (1, -2), (-1, 2), (-1, -2)])


def write_catalog(tmp_path, formulas, name="cat.txt", n=None):
    path = str(tmp_path / name)
    ct.save(path, formulas, n=n)
    return path


def test_generate_writes_catalog_and_manifest(tmp_path, capsys):
    out = str(tmp_path / "ruh.txt")
    manifest = str(tmp_path / "run.json")
    rc = cli.main(["generate", "--vars", "3", "--clauses", "6",
                   "--class", "ruh", "--out", out, "--manifest", manifest])
    assert rc == 0
    entries = ct.load(out)
    assert len(entries) == 3
    assert all(e.n == 3 for e in entries)
    meta = json.load(open(manifest))
    assert meta["count"] == 3
    assert meta["task"]["class"] == "ruh"
    assert meta["stats"]["nodes"] > 0
    assert "3 formulas" in capsys.readouterr().err


def test_generate_seen_dedup_matches(tmp_path):
    a = str(tmp_path / "a.txt")
    b = str(tmp_path / "b.txt")
    assert cli.main(["generate", "--vars", "3", "--clauses", "5",
                     "--class", "uh", "--out", a]) == 0
    assert cli.main(["generate", "--vars", "3", "--clauses", "5",
                     "--class", "uh", "--dedup", "seen", "--out", b]) == 0
    load = lambda p: [e.formula for e in ct.load(p)]
    assert load(a) == load(b)


def test_check_text_output(tmp_path, capsys):
    path = write_catalog(tmp_path, [ct.cycle_mu(5), ct.hard_eight_split()])
    assert cli.main(["check", path]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 2
    assert "hitting=yes" in lines[0]
    assert "mu=yes" in lines[0]
    assert "irreducible=yes" in lines[0]
    assert "irreducible=no" in lines[1]
    assert "strongly_irreducible=no" in lines[1]


def test_check_json_output(tmp_path, capsys):
    path = write_catalog(tmp_path, [ct.cycle_mu(5)])
    assert cli.main(["--format", "json", "check", path]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert rows[0]["m"] == 5
    assert rows[0]["saturated"] is True
    assert rows[0]["aut"] == 6


def test_count_command(tmp_path, capsys):
    sat_hitting = fm.formula([(1, 2), (-1, 2)])
    path = write_catalog(tmp_path, [ct.cycle_mu(5), sat_hitting,
                                    ct.cycle_mu(6)], n=4)
    assert cli.main(["count", path]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert "models=0" in lines[0] and "method=hitting" in lines[0]
    assert "models=8" in lines[1] and "unsat=no" in lines[1]
    assert "models=0" in lines[2] and "method=bruteforce" in lines[2]


def test_canon_dedup(tmp_path, capsys):
    f = ct.cycle_mu(5)
    g = fm.formula([tuple(-l for l in c) for c in f])  # sign-flipped copy
    path = write_catalog(tmp_path, [f, g])
    assert cli.main(["canon", path]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 2
    assert lines[0] == lines[1]
    assert cli.main(["canon", "--dedup", path]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 1


def test_encode_emits_dimacs(tmp_path, capsys):
    path = write_catalog(tmp_path, [F24])
    assert cli.main(["encode", path, "--steps", "7", "--varmap"]) == 0
    text = capsys.readouterr().out
    f, nvars = fm.from_dimacs(text)
    assert len(f) >= 1
    assert "c var 1 = " in text


def test_encode_wants_one_formula(tmp_path, capsys):
    path = write_catalog(tmp_path, [F24, ct.cycle_mu(5)])
    assert cli.main(["encode", path, "--steps", "7"]) == 2
    assert "exactly one formula" in capsys.readouterr().err


def test_hardness_csv_and_witness(tmp_path, capsys):
    path = write_catalog(tmp_path, [F24, ct.cycle_mu(5)])
    wdir = str(tmp_path / "wit")
    rc = cli.main(["--format", "csv", "--solver", "builtin",
                   "hardness", path, "--witness", wdir])
    assert rc == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert [r["h"] for r in rows] == ["7", "10"]
    assert [r["class"] for r in rows] == ["ruh", "iuh"]
    assert rows[0]["copies"] == "1"  # the full cube is fixed by every relabeling
    assert rows[1]["copies"] == "8"
    assert float(rows[1]["sat_time"]) > 0
    for i, f in enumerate([F24, ct.cycle_mu(5)]):
        dag = rf.RefutationDag.from_text(
            open(os.path.join(wdir, "%03d.proof" % i)).read())
        dag.validate(axioms=f)


def test_hardness_unresolved_exit_code(tmp_path, capsys):
    path = write_catalog(tmp_path, [F24])
    rc = cli.main(["--solver", "builtin", "hardness", path,
                   "--max-steps", "6"])
    assert rc == 1
    assert "h=?" in capsys.readouterr().out


def test_verify_fixture_and_mutation(tmp_path, capsys):
    fixdir = os.path.join(os.path.dirname(__file__), "fixtures")
    path = write_catalog(tmp_path, [ct.cycle_mu(5)])
    rc = cli.main(["verify", path, os.path.join(fixdir, "cycle5.proof")])
    assert rc == 0
    assert "valid  length=10  read_once=no" in capsys.readouterr().out
    broken = str(tmp_path / "broken.proof")
    text = open(os.path.join(fixdir, "cycle5.proof")).read()
    with open(broken, "w") as fp:
        fp.write(text.replace("R 7 9 1 0", "R 7 9 1 1 0"))
    rc = cli.main(["verify", path, broken])
    assert rc == 1
    assert "invalid" in capsys.readouterr().out


def test_verify_missing_file(tmp_path, capsys):
    path = write_catalog(tmp_path, [ct.cycle_mu(5)])
    assert cli.main(["verify", path, str(tmp_path / "none.proof")]) == 2
    assert capsys.readouterr().err


def test_verify_index_selects_row(tmp_path, capsys):
    fixdir = os.path.join(os.path.dirname(__file__), "fixtures")
    proof = os.path.join(fixdir, "cycle5.proof")
    path = write_catalog(tmp_path, [F24, ct.cycle_mu(5)])
    assert cli.main(["verify", path, proof]) == 2
    assert "--index" in capsys.readouterr().err
    assert cli.main(["verify", path, proof, "--index", "1"]) == 0
    assert "valid" in capsys.readouterr().out
    assert cli.main(["verify", path, proof, "--index", "0"]) == 1
    assert "invalid" in capsys.readouterr().out
    assert cli.main(["verify", path, proof, "--index", "5"]) == 2
    assert "out of range" in capsys.readouterr().err


def test_stats_cell_summary(tmp_path, capsys):
    path = write_catalog(tmp_path, [ct.cycle_mu(5), F24])
    assert cli.main(["--format", "json", "--solver", "builtin",
                     "stats", path]) == 0
    rows = json.loads(capsys.readouterr().out)
    by_cell = {(r["n"], r["m"]): r for r in rows}
    assert by_cell[(2, 4)]["max_h"] == 7
    assert by_cell[(2, 4)]["attaining"] == 1
    assert by_cell[(2, 4)]["avg_h_weighted"] == 7.0
    assert by_cell[(3, 5)]["max_h"] == 10
    assert by_cell[(3, 5)]["unresolved"] == 0


def test_export_dimacs_directory(tmp_path, capsys):
    path = write_catalog(tmp_path, [F24, ct.cycle_mu(5)])
    ddir = str(tmp_path / "cnf")
    assert cli.main(["export-dimacs", path, "--dir", ddir]) == 0
    names = sorted(os.listdir(ddir))
    assert names == ["0000.cnf", "0001.cnf"]
    f, nv = fm.from_dimacs(open(os.path.join(ddir, "0001.cnf")).read())
    assert nv == 3 and len(f) == 5


def test_export_dimacs_single_stdout(tmp_path, capsys):
    path = write_catalog(tmp_path, [F24])
    assert cli.main(["export-dimacs", path]) == 0
    f, nv = fm.from_dimacs(capsys.readouterr().out)
    assert f == F24
    multi = write_catalog(tmp_path, [F24, F24], name="two.txt")
    assert cli.main(["export-dimacs", multi]) == 2


def test_stdin_input(tmp_path, capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO(ct.format_entry(F24) + "\n"))
    assert cli.main(["count"]) == 0
    assert "models=0" in capsys.readouterr().out


def test_bad_input_is_exit_2(tmp_path, capsys):
    bad = str(tmp_path / "bad.txt")
    with open(bad, "w") as fp:
        fp.write("not a catalog line\n")
    assert cli.main(["check", bad]) == 2
    assert cli.main(["check", str(tmp_path / "missing.txt")]) == 2
    path = write_catalog(tmp_path, [F24])
    assert cli.main(["encode", path, "--steps", "3"]) == 2  # s <= m


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["--version"])
    assert exc.value.code == 0
