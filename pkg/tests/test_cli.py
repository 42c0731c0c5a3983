import io
import json
import math
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from gaussbm.cli import GAP_FIELDS, main, round_sig

SCHEMA = json.loads(resources.files("gaussbm").joinpath("schemas/reports.schema.json").read_text())


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    status = main(list(argv), stdout=out, stderr=err)
    return status, out.getvalue(), err.getvalue()


def records(text):
    objs = [json.loads(line) for line in text.splitlines()]
    for obj in objs:
        jsonschema.validate(obj, SCHEMA)
    return objs


def test_reproduce_witness():
    status, out, _ = run("reproduce", "--alpha", "1.3", "--eps", "0.1", "--lambda", "0.5", "--tol", "1e-10", "--format", "json")
    assert status == 0
    (rep,) = records(out)
    assert rep["violated"] is True
    assert list(rep) == list(GAP_FIELDS)


def test_reproduce_below_critical():
    status, out, _ = run("reproduce", "--alpha", "0.3", "--eps", "0.05", "--lambda", "0.5")
    assert status == 0 and records(out)[0]["violated"] is False


def test_reproduce_degrees():
    _, rad, _ = run("reproduce", "--alpha", "1.3")
    _, deg, _ = run("reproduce", "--alpha", repr(math.degrees(1.3)), "--degrees")
    assert records(deg)[0]["violated"] == records(rad)[0]["violated"] is True


@pytest.mark.parametrize("argv", [
    ("reproduce", "--lambda", "1.5"),
    ("reproduce", "--alpha", "abc"),
    ("reproduce", "--tol", "0"),
    ("reproduce", "--precision", "3"),
    ("nonsense",),
    ("critical-angle", "--tol", "0"),
    ("oracle", "--alpha", "0", "--n", "10"),
    ("bconj", "--shape", "wedge", "--alpha", "1.0"),
    ("bconj", "--shape", "strip"),
    ("bconj", "--shape", "halfspace1d"),
    ("scan", "--alpha-grid", "", "--eps-grid", "0.05", "--lambda-grid", "0.5", "--out", "x.csv"),
])
def test_usage_errors(argv, capsys):
    status, out, _ = run(*argv)
    assert status == 1
    assert out == ""


def test_convergence_failure_status():
    status, out, err = run("reproduce", "--tol", "1e-18")
    assert status == 2 and out == "" and "convergence" in err


def test_critical_angle():
    status, out, _ = run("critical-angle", "--tol", "1e-12")
    (rep,) = records(out)
    assert status == 0
    assert abs(rep["root"] - math.pi / 4) <= 1e-12
    assert rep["bracket_below"] < 0 < rep["bracket_above"]
    assert str(rep["root"]).startswith("0.7853981633974")
    _, out, _ = run("critical-angle", "--tol", "1e-3", "--format", "csv")
    header, row = out.splitlines()
    assert header == "root,tol,bracket_below,bracket_above"
    assert abs(float(row.split(",")[0]) - 0.785) <= 1e-3


def test_scan_csv(tmp_path):
    path = tmp_path / "scan.csv"
    status, _, _ = run("scan", "--alpha-grid", "0.3,1.3", "--eps-grid", "0.05,0.1", "--lambda-grid", "0.25,0.5", "--out", str(path))
    assert status == 0
    raw = path.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode("utf-8").splitlines()
    assert lines[0] == "alpha,eps,lambda,gap,gap_error_bound,predicted,agreement,violated"
    assert len(lines) == 9
    cells = [tuple(map(float, l.split(",")[:3])) for l in lines[1:]]
    assert cells == [(a, e, l) for a in (0.3, 1.3) for e in (0.05, 0.1) for l in (0.25, 0.5)]
    assert [l.rsplit(",", 1)[1] for l in lines[1:]] == ["false"] * 4 + ["true"] * 4
    assert list(tmp_path.iterdir()) == [path]


def test_scan_sign_structure(tmp_path):
    path = tmp_path / "s.csv"
    run("scan", "--alpha-grid", "0.3,1.3", "--eps-grid", "0.05", "--lambda-grid", "0.5", "--out", str(path))
    assert [l.rsplit(",", 1)[1] for l in path.read_text().splitlines()[1:]] == ["false", "true"]


def test_scan_json_lines(tmp_path):
    path = tmp_path / "s.jsonl"
    run("scan", "--alpha-grid", "1.3", "--eps-grid", "0.05", "--lambda-grid", "0.5", "--out", str(path), "--format", "json")
    (rep,) = records(path.read_text())
    assert rep["violated"] is True


def test_scan_unwritable(tmp_path):
    target = tmp_path / "missing" / "scan.csv"
    status, _, err = run("scan", "--alpha-grid", "1.3", "--eps-grid", "0.05", "--lambda-grid", "0.5", "--out", str(target))
    assert status == 1 and "cannot write" in err
    assert not target.parent.exists()


def test_scan_does_not_clobber_on_failure(tmp_path):
    path = tmp_path / "keep.csv"
    path.write_text("old\n")
    status, _, _ = run("scan", "--alpha-grid", "1.3", "--eps-grid", "-1", "--lambda-grid", "0.5", "--out", str(path))
    assert status == 1
    assert path.read_text() == "old\n"


def test_bconj():
    status, out, _ = run("bconj", "--shape", "wedge", "--alpha", "1.0", "--eps", "0.01", "--t0", "0", "--h", "0.05")
    (rep,) = records(out)
    assert status == 0 and rep["second_derivative"] > 0 and rep["log_concave_locally"] is False
    assert rep["second_derivative"] == pytest.approx(0.0119, abs=5e-4)
    _, out, _ = run("bconj", "--shape", "strip", "--c", "1", "--t0", "0", "--h", "0.01")
    assert records(out)[0]["second_derivative"] < 0
    _, out, _ = run("bconj", "--shape", "halfspace1d", "--eps", "0.01", "--t0", "0", "--h", "0.01")
    assert records(out)[0]["second_derivative"] > 0
    _, out, _ = run("bconj", "--shape", "strip", "--c", "1", "--format", "csv")
    header, row = out.splitlines()
    assert header.split(",")[0] == "shape" and row.startswith("strip,")


def test_oracle():
    status, out, _ = run("oracle", "--alpha", "0.7853981634", "--shift", "0", "--n", "1000000", "--seed", "42")
    (rep,) = records(out)
    assert status == 0
    assert abs((rep["mc_mean"] - 0.25) / rep["mc_std_error"]) <= 5
    status, out, _ = run("oracle", "--alpha", "0", "--shift", "0", "--n", "1000000", "--seed", "1")
    (rep,) = records(out)
    assert status == 0 and rep["quadrature"] == pytest.approx(0.5, abs=1e-10) and abs(rep["z"]) <= 5


def test_oracle_disagreement_status():
    # 1000 samples of a wedge with measure ~3e-5 hit nothing; z is then infinite
    status, out, _ = run("oracle", "--alpha", "1.5707", "--shift", "0", "--n", "1000", "--seed", "3")
    assert status == 3
    assert records(out)[0]["z"] is None


@pytest.mark.parametrize("argv", [
    ("reproduce", "--alpha", "1.3"),
    ("critical-angle",),
    ("bconj", "--shape", "wedge", "--alpha", "1.0", "--eps", "0.01", "--format", "csv"),
    ("oracle", "--alpha", "0.4", "--shift", "0.1", "--n", "20000", "--seed", "9"),
])
def test_deterministic_output(argv):
    assert run(*argv) == run(*argv)


def test_precision_rounding():
    _, out, _ = run("reproduce", "--precision", "6", "--format", "csv")
    row = out.splitlines()[1].split(",")
    assert row[3] == "-3.00403e-05"
    assert round_sig(0.1, 17) == 0.1 and repr(round_sig(1 / 3, 6)) == "0.333333"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gaussbm", "critical-angle", "--tol", "1e-9"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["root"] == pytest.approx(math.pi / 4, abs=1e-9)
