import subprocess
import sys

import pytest

from thermalnet.cli import main


def run(*args):
    proc = subprocess.run(
        [sys.executable, "-m", "thermalnet", *map(str, args)], capture_output=True, text=True
    )
    return proc.returncode, proc.stdout, proc.stderr


def test_maxflow_diamond(fixtures):
    code, out, _ = run("maxflow", fixtures / "diamond.tn")
    assert code == 0
    assert "max flow: 5" in out and "min cut: {a,b} capacity 5" in out


def test_simulate_path(fixtures):
    code, out, _ = run("simulate", fixtures / "path.tn", "--tau", "2", "--stages", "5")
    assert code == 0
    rows = [line.split() for line in out.splitlines() if line[:1].isdigit()]
    assert [r[1] for r in rows[1:]] == ["1"] * 4
    assert [r[4] for r in rows[1:]] == ["1/2"] * 4


def test_tausweep_marks_optimum(fixtures):
    code, out, _ = run("tausweep", fixtures / "path.tn", "--from", "1", "--to", "4", "--steps", "4", "--stages", "10")
    assert code == 0
    assert "2 1/2 *" in out and "1 0" in out


def test_steady_confirms(fixtures):
    code, out, _ = run("steady", fixtures / "onset.tn")
    assert code == 0
    assert "onset bound: 6" in out and "confirmation: PASS" in out


def test_coolplan(fixtures):
    code, out, _ = run("coolplan", fixtures / "diamond.tn", "--exhaust")
    assert code == 0
    assert "total packets: 10 (formula 10)" in out and "restored flow: 5 of 5" in out


def test_cuts(fixtures):
    code, out, _ = run("cuts", fixtures / "onset.tn")
    assert code == 0 and "2 inclusion-minimal node cuts" in out


def test_cuts_size_refusal(fixtures):
    assert run("cuts", fixtures / "onset.tn", "--bound", "2")[0] == 3


@pytest.mark.parametrize("name", ["bad_directive.tn", "bad_edge.tn", "overflow.tn", "missing.tn"])
def test_input_errors(fixtures, name):
    code, _, err = run("maxflow", fixtures / name)
    assert code == 2 and err.startswith("thermalnet:")


def test_parse_error_names_line(fixtures):
    assert "line 4" in run("maxflow", fixtures / "bad_directive.tn")[2]


@pytest.mark.parametrize(
    "args", [[], ["bogus"], ["simulate", "x.tn"], ["simulate", "x.tn", "--tau", "warm", "--stages", "2"]]
)
def test_usage_errors(args, capsys):
    assert main(args) == 1


def test_verify_file(fixtures):
    code, out, _ = run("verify", fixtures / "diamond.tn")
    assert code == 0 and out.rstrip().endswith("verdict: PASS")


def test_verify_csv(fixtures, tmp_path):
    target = tmp_path / "r.csv"
    code, out, _ = run("verify", fixtures / "path.tn", "--format", "csv", "--csv", target)
    assert code == 0
    assert out.splitlines()[0] == "theorem,instance_digest,expected,observed,verdict"
    assert target.read_text() == out


def test_verify_batch_deterministic():
    first = run("verify", "--seed", "3", "--trials", "15")
    second = run("verify", "--seed", "3", "--trials", "15")
    assert first == second
    assert first[0] in (0, 4)
