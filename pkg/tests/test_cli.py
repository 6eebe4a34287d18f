import json
import subprocess
import sys

from dgkernels.cli import run, sample_runs, schema_errors
from dgkernels.harness import corpus_files
from dgkernels.linalg import Field

F2 = Field(2)
FILES = {p.name: str(p) for p in corpus_files(F2)}


def test_validate_exit_zero():
    code, text = run(["validate", FILES["A2.dg"]])
    assert code == 0, text


def test_compose_then_validate(tmp_path):
    out = tmp_path / "E12.dg"
    code, _ = run(["compose-kernels", FILES["ker(A2->A3_outer).dg"], FILES["ker(A3->A2_collapse).dg"],
                   "--out", str(out)])
    assert code == 0 and out.exists()
    code, text = run(["validate", str(out)])
    assert code == 0, text


def test_failing_check_exit_one():
    code, text = run(["heq-modules", FILES["S_y(A2).dg"], FILES["h^y(A2).dg"], "--json"])
    assert code == 1
    assert json.loads(text)["status"] == "fail"


def test_usage_errors_exit_three(tmp_path):
    assert run(["validate", FILES["A2.dg"], "--field", "Q"])[0] == 3
    assert run(["yoneda", FILES["A2.dg"], "nope"])[0] == 3
    assert run(["validate", str(tmp_path / "missing.dg")])[0] == 3
    assert run(["no-such-command"])[0] == 3
    bad = tmp_path / "bad.dg"
    bad.write_text("{ not json")
    code, text = run(["validate", str(bad), "--json"])
    assert code == 3 and "line 1" in json.loads(text)["error"]


def test_reports_validate_against_schema():
    for argv in sample_runs(F2):
        code, text = run(argv + ["--json"])
        assert not schema_errors(text), argv
        assert json.loads(text)["exit_code"] == code


def test_runs_are_deterministic():
    argv = ["rqr-check", FILES["diag(A2).dg"], "--seed", "5", "--json"]
    assert run(argv) == run(argv)


def test_constructions_emit_documents(tmp_path):
    code, text = run(["yoneda", FILES["A2.dg"], "y"])
    assert code == 0 and json.loads(text)["kind"] == "module"
    code, text = run(["unit-kernel", FILES["A2.dg"], "--json"])
    assert code == 0 and json.loads(text)["output"]["kind"] == "kernel"
    code, _ = run(["standard-homotopy", FILES["id_O.dg"], FILES["id_O.dg"],
                   "--alpha", '[["x", [1]], ["y", [1]], ["z", [1]]]'])
    assert code == 0


def test_harness_single_suite_rejects_unknown():
    assert run(["harness", "--suite", "nonsense"])[0] == 3


def test_console_script_entry_point():
    out = subprocess.run([sys.executable, "-m", "dgkernels.cli", "validate", FILES["A2.dg"]],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "pass" in out.stdout
