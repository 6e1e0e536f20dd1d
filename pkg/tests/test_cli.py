import json
import subprocess
import sys

import pytest

from bergersphere.cli import ConfigError, RunConfig, main, parse_exact_epsilon, parse_numeric_epsilon
from bergersphere.reports import CURVE_COLUMNS, SCAN_COLUMNS


def run_cli(*args):
    proc = subprocess.run([sys.executable, "-m", "bergersphere", *args], capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


def test_verify_geometry(tmp_path):
    out = tmp_path / "geom.json"
    assert main(["verify-geometry", "--epsilon", "0.5", "-o", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["pass"] and all(c["pass"] for c in report["checks"])
    names = {c["name"] for c in report["checks"]}
    assert {"R_1212", "hopf_fiber_invariance", "base_gauss_curvature"} <= names


def test_scan_json_and_csv(tmp_path, capsys):
    js = tmp_path / "scan.json"
    assert main(["scan-tori", "--epsilon", "0.5", "--samples", "256", "-o", str(js)]) == 0
    summary = json.loads(js.read_text())
    assert summary["root"] == pytest.approx(0.3779644730, abs=1e-6)
    assert len(summary["profile"]) == 256
    csv_path = tmp_path / "scan.csv"
    assert main(["scan-tori", "--epsilon", "0.5", "--samples", "64", "--format", "csv", "-o", str(csv_path)]) == 0
    lines = csv_path.read_text().splitlines()
    assert lines[0] == ",".join(SCAN_COLUMNS) and len(lines) == 65
    assert json.loads(capsys.readouterr().err)["pass"] is True


def test_scan_no_root_for_large_eps(tmp_path):
    out = tmp_path / "s.json"
    assert main(["scan-tori", "--epsilon", "1.5", "--samples", "64", "-o", str(out)]) == 0
    assert json.loads(out.read_text())["roots"] == []


def test_integrate_curve_csv(tmp_path):
    out = tmp_path / "curve.csv"
    assert main(["integrate-curve", "--epsilon", "0.5", "--radius", "0.3", "--steps", "512",
                 "--format", "csv", "-o", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(CURVE_COLUMNS) and len(lines) == 514


def test_certify(tmp_path):
    out = tmp_path / "cert.json"
    assert main(["certify-submersion", "--epsilon", "1/2", "-o", str(out)]) == 0
    cert = json.loads(out.read_text())
    assert cert["degree"] == 7 and cert["leading_coefficient"] == "80"
    assert cert["admissible_roots"] == [] and cert["conclusion"] == "biharmonic_iff_harmonic"


@pytest.mark.parametrize("args", [
    ["scan-tori", "--epsilon", "0.5", "--samples", "128", "--jobs", "1"],
    ["scan-tori", "--epsilon", "0.5", "--samples", "128", "--jobs", "5"],
    ["integrate-curve", "--epsilon", "0.7", "--steps", "256", "--format", "csv"],
    ["certify-submersion", "--epsilon", "3/4"],
])
def test_repeated_runs_byte_identical(args):
    first = run_cli(*args)
    second = run_cli(*args)
    assert first[0] == 0 and first == second


def test_jobs_do_not_change_output():
    a = run_cli("scan-tori", "--epsilon", "0.3", "--samples", "200", "--jobs", "1")[1]
    b = run_cli("scan-tori", "--epsilon", "0.3", "--samples", "200", "--jobs", "6")[1]
    assert a == b


@pytest.mark.parametrize("args", [
    ["verify-geometry", "--epsilon", "abc"],
    ["verify-geometry", "--epsilon", "0"],
    ["verify-geometry", "--epsilon", "1/2"],
    ["verify-geometry", "--epsilon", "0.5", "--format", "csv"],
    ["certify-submersion", "--epsilon", "0.5"],
    ["certify-submersion", "--epsilon", "1"],
    ["certify-submersion", "--epsilon", "-1/1"],
    ["scan-tori", "--epsilon", "0.5", "--r-min", "0.4", "--r-max", "0.3"],
    ["scan-tori", "--epsilon", "0.5", "--samples", "4"],
    ["integrate-curve", "--epsilon", "0.5", "--radius", "0.7"],
    ["no-such-command"],
    [],
])
def test_usage_errors_exit_two(args):
    assert main(args) == 2


def test_unwritable_output_exits_two(tmp_path):
    target = tmp_path / "missing" / "out.json"
    assert main(["verify-geometry", "--epsilon", "0.5", "-o", str(target)]) == 2


def test_console_entry_point():
    code, out, _ = run_cli("verify-geometry", "--epsilon", "0.25")
    assert code == 0 and json.loads(out)["epsilon"] == 0.25


def test_parsers():
    assert parse_numeric_epsilon("0.5").epsilon == 0.5
    assert str(parse_exact_epsilon("3/4")) == "3/4"
    assert parse_exact_epsilon("symbolic") == "symbolic"
    for bad in ("0.5", "x", "1", "0"):
        with pytest.raises(ConfigError):
            parse_exact_epsilon(bad)
    with pytest.raises(ConfigError):
        RunConfig(command="bogus", epsilon="0.5")
