"""End-to-end CLI behavior, exit codes, reproducibility."""
import os
import subprocess
import sys

import pytest
from click.testing import CliRunner

from exactlift.cli import cli

run = CliRunner()


def invoke(args, **kw):
    return run.invoke(cli, args, catch_exceptions=False, **kw)


def test_gen_cycle_and_solve_blp(tmp_path):
    out = str(tmp_path / "c4.vcsp")
    res = invoke(["gen", "--maxcut-cycle", "4", "-o", out])
    assert res.exit_code == 0
    res = invoke(["solve-blp", out])
    assert res.exit_code == 0
    assert "value: 4" in res.output


def test_gen_is_reproducible(tmp_path):
    a, b = str(tmp_path / "a.3lin"), str(tmp_path / "b.3lin")
    invoke(["gen", "--threelin", "5", "3", "--seed", "9", "-o", a])
    invoke(["gen", "--threelin", "5", "3", "--seed", "9", "-o", b])
    assert open(a, "rb").read() == open(b, "rb").read()


TINY_LP = "var x\nrow >= 0 1*x\nrow >= -1 -1*x\nobj 1*x\n"


def test_encode_writes_lp(tmp_path):
    vcsp = str(tmp_path / "edge.vcsp")
    invoke(["gen", "--maxcut-path", "2", "-o", vcsp])
    res = invoke(["encode", vcsp])
    assert res.exit_code == 0
    assert "8 variables" in res.output
    assert os.path.exists(str(tmp_path / "edge.lp"))


def test_lift_solve_certify_chain(tmp_path):
    lp_path = str(tmp_path / "tiny.lp")
    open(lp_path, "w").write(TINY_LP)
    res = invoke(["lift", lp_path, "--level", "1"])
    assert res.exit_code == 0
    sdp_path = str(tmp_path / "tiny.t1.sdp")
    sol_path = str(tmp_path / "tiny.sol")
    res = invoke(["solve-sdp", sdp_path, "--delta", "1/8", "-o", sol_path])
    assert res.exit_code == 0
    assert "rounded: 1" in res.output
    res = invoke(["certify", sdp_path, sol_path])
    assert res.exit_code == 0
    assert "all checks passed" in res.output


def test_reduce_chain(tmp_path):
    lin = str(tmp_path / "s.3lin")
    invoke(["gen", "--threelin", "4", "1", "--seed", "3", "-o", lin])
    res = invoke(["reduce", "--chain", "3lin", lin])
    assert res.exit_code == 0
    assert "satisfiability preserved" in res.output
    assert os.path.exists(str(tmp_path / "s.cnf"))
    assert os.path.exists(str(tmp_path / "s.graph"))


def test_min_level_captured_instance(tmp_path):
    vcsp = str(tmp_path / "edge.vcsp")
    invoke(["gen", "--maxcut-path", "2", "-o", vcsp])
    csv = str(tmp_path / "out.csv")
    res = invoke(["min-level", vcsp, "--t-max", "2", "--csv", csv])
    assert res.exit_code == 0
    assert "capture level: 0" in res.output
    header = open(csv).read().splitlines()[0]
    assert header == "instance,opt,blp,level,status,value,rounded,captured"


def test_min_level_triangle_reports_guarded_levels(tmp_path):
    vcsp = str(tmp_path / "tri.vcsp")
    invoke(["gen", "--maxcut-cycle", "3", "-o", vcsp])
    result = run.invoke(cli, ["min-level", vcsp, "--t-max", "3", "--guard", "50"])
    assert result.exit_code == 3  # capture undetermined within the guard
    assert "opt: 2    blp: 3" in result.output
    assert "size_guarded" in result.output
    assert "not captured <= 3" in result.output


def test_min_level_batch_with_threads(tmp_path, monkeypatch):
    a, b = str(tmp_path / "a.vcsp"), str(tmp_path / "b.vcsp")
    invoke(["gen", "--maxcut-path", "2", "-o", a])
    invoke(["gen", "--maxcut-cycle", "4", "-o", b])
    monkeypatch.setenv("EXACTLIFT_THREADS", "2")
    res = invoke(["min-level", a, b, "--t-max", "1"])
    assert res.exit_code == 0
    assert res.output.count("capture level: 0") == 2


def test_min_level_output_is_reproducible(tmp_path):
    vcsp = str(tmp_path / "edge.vcsp")
    invoke(["gen", "--maxcut-path", "2", "-o", vcsp])
    c1, c2 = str(tmp_path / "r1.csv"), str(tmp_path / "r2.csv")
    invoke(["min-level", vcsp, "--t-max", "1", "--csv", c1])
    invoke(["min-level", vcsp, "--t-max", "1", "--csv", c2])
    assert open(c1, "rb").read() == open(c2, "rb").read()


def test_parse_error_exit_code(tmp_path):
    bad = tmp_path / "bad.vcsp"
    bad.write_text("domain 0 1\nwhat is this\n")
    proc = subprocess.run(
        [sys.executable, "-m", "exactlift.cli", "solve-blp", str(bad)],
        capture_output=True, text=True)
    assert proc.returncode == 2
    assert "parse error" in proc.stderr


def test_contract_violation_exit_code(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "exactlift.cli", "gen", "-o", str(tmp_path / "x")],
        capture_output=True, text=True)
    assert proc.returncode == 4


def test_solver_budget_exit_code(tmp_path):
    lp_path = str(tmp_path / "tiny.lp")
    open(lp_path, "w").write(TINY_LP)
    invoke(["lift", lp_path, "--level", "1"])
    proc = subprocess.run(
        [sys.executable, "-m", "exactlift.cli", "solve-sdp",
         str(tmp_path / "tiny.t1.sdp"), "--budget", "3"],
        capture_output=True, text=True)
    assert proc.returncode == 3


def test_certify_rejects_tampered_solution(tmp_path):
    lp_path = str(tmp_path / "tiny.lp")
    open(lp_path, "w").write(TINY_LP)
    invoke(["lift", lp_path, "--level", "1"])
    sdp_path = str(tmp_path / "tiny.t1.sdp")
    sol_path = str(tmp_path / "tiny.sol")
    invoke(["solve-sdp", sdp_path, "--delta", "1/8", "-o", sol_path])
    text = open(sol_path).read().replace("value ", "value 9999", 1)
    tampered = str(tmp_path / "tampered.sol")
    open(tampered, "w").write(text)
    result = run.invoke(cli, ["certify", sdp_path, tampered])
    assert result.exit_code != 0


def test_thread_env_validation(monkeypatch):
    monkeypatch.setenv("EXACTLIFT_THREADS", "zero")
    from exactlift.cli import thread_count
    from exactlift.errors import ContractViolation
    with pytest.raises(ContractViolation):
        thread_count()
