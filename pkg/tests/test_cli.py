import json
import subprocess
import sys

import pytest

from cyclohom.cli import run
from cyclohom.exactlinalg import IntMatrix
from cyclohom.simplicial import SimplicialComplex, subcomplex_KA


def test_cyclotomic_text(capsys):
    assert run(["cyclotomic", "15"]) == 0
    assert capsys.readouterr().out == "1 -1 0 1 -1 1 0 -1 1\n"


def test_cyclotomic_json(capsys):
    assert run(["cyclotomic", "12", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out) == ["1", "0", "-1", "0", "1"]


@pytest.mark.parametrize("argv", [["cyclotomic", "0"], ["cyclotomic", "x"], ["verify", "12"],
                                  ["verify", "15", "--checks", "nope"], ["bogus"], []])
def test_usage_errors_exit_2(argv, capsys):
    assert run(argv) == 2
    assert capsys.readouterr().err


def test_verify_json_n105(capsys):
    assert run(["verify", "105", "--checks", "main", "--format", "json"]) == 0
    (report,) = json.loads(capsys.readouterr().out)
    j7 = next(c for c in report["cases"] if c["id"] == "j=7")
    assert j7["witness"]["torsion"] == [2]
    assert report["status"] == "pass"


def test_verify_failure_exit_1(monkeypatch, capsys):
    import cyclohom.verify as v

    def fake(n):
        r = v.VerificationReport(n, "main")
        r.add("j=0", False)
        return r

    monkeypatch.setitem(v.RUNNERS, "main", fake)
    assert run(["verify", "15"]) == 1
    captured = capsys.readouterr()
    assert "FAIL j=0" in captured.out and "check failed" in captured.err


def test_sweep_csv_to_file(tmp_path):
    out = tmp_path / "summary.csv"
    assert run(["sweep", "--max-n", "30", "--checks", "main,migotti", "--format", "csv", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "n,check_id,status,cases,failed,elapsed_ms"
    assert len(lines) == 1 + 2 * 18


def test_sweep_byte_identical(tmp_path, capsys):
    argv = ["sweep", "--max-n", "35", "--checks", "main,kT,signs", "--format", "json", "--seed", "9"]
    run(argv)
    first = capsys.readouterr().out
    run(argv + ["--threads", "3"])
    second = capsys.readouterr().out
    run(argv)
    third = capsys.readouterr().out
    assert first == second == third


def test_homology_subcommand(tmp_path, capsys):
    path = tmp_path / "k7.json"
    path.write_text(subcomplex_KA(105, {7}).to_json())
    assert run(["homology", "--in", str(path), "--dim", "1"]) == 0
    assert capsys.readouterr().out == "Z/2\n"
    assert run(["homology", "--in", str(path), "--dim", "1", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out) == {"dim": 1, "free_rank": 0, "torsion": [2]}
    path.write_text(json.dumps({"parts": [3, 5], "facets": [[0, 1], [1, None]], "full_skeleton": False}))
    assert run(["homology", "--in", str(path), "--dim", "0"]) == 0
    assert capsys.readouterr().out == "Z\n"


def test_homology_bad_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert run(["homology", "--in", str(path), "--dim", "0"]) == 2


def test_snf_subcommand(tmp_path, capsys):
    path = tmp_path / "m.txt"
    path.write_text(IntMatrix.from_dense([[2, 4], [6, 8]]).to_text())
    assert run(["snf", "--in", str(path)]) == 0
    assert capsys.readouterr().out == "2 4\n"
    assert run(["snf", "--in", str(path), "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out) == {"rows": 2, "cols": 2, "rank": 2, "invariant_factors": [2, 4]}
    path.write_text("2 2 5\n0 0 1\n")
    assert run(["snf", "--in", str(path)]) == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cyclohom", "cyclotomic", "15"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "1 -1 0 1 -1 1 0 -1 1\n"
