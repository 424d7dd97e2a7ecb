"""Scenario validation, CLI exit codes, report determinism."""

import json
import subprocess
import sys
from pathlib import Path

import pytest

from sta.errors import ConfigError, UnknownSuite
from sta.scenario import Scenario, builtin_scenario_names, load_config, parse_expr

FIXTURES = Path(__file__).parent / "fixtures"


def run_cli(*args, cwd):
    return subprocess.run(
        [sys.executable, "-m", "sta.cli", *args],
        capture_output=True, text=True, cwd=cwd,
    )


def small(cfg, grid=3):
    cfg = dict(cfg)
    cfg["grid"] = grid
    return cfg


def test_builtin_scenarios_exist():
    names = builtin_scenario_names()
    assert names == sorted([
        "boosted-plane-wave", "gauge-sine", "lorentz-local-rotor",
        "minkowski-plane-wave", "torsion-toy",
    ])
    for n in names:
        Scenario(small(load_config(n)))  # parses and validates


def test_unknown_scenario_name():
    with pytest.raises(ConfigError):
        load_config("no-such-scenario")


def test_validation_errors():
    base = load_config("minkowski-plane-wave")
    bad = dict(base)
    bad["tolerances"] = {"representative-residual": -1.0}
    with pytest.raises(ConfigError):
        Scenario(bad)
    bad = dict(base)
    bad["suites"] = ["dirac-triad", "nope"]
    with pytest.raises(UnknownSuite):
        Scenario(bad)
    bad = dict(base)
    bad["chart"] = {"lo": [0, 0, 0, 0], "hi": [0, 1, 1, 1]}
    with pytest.raises(ConfigError):
        Scenario(bad)
    bad = dict(base)
    bad["unknown"] = {"type": "expr", "expr": {"kind": "warp-field"}}
    with pytest.raises(ConfigError):
        Scenario(bad)


def test_expression_parsing_errors():
    with pytest.raises(ConfigError):
        parse_expr({"kind": "constant", "blades": {"e9": 1.0}})
    with pytest.raises(ConfigError):
        parse_expr({"kind": "polynomial", "terms": [{"blade": "1", "coef": 1.0,
                                                     "powers": [4, 0, 0, 0]}]})
    with pytest.raises(ConfigError):
        parse_expr({"kind": "scalar-linear", "slope": [1, 2]})


def test_exit_code_zero(tmp_path):
    r = run_cli("run", "minkowski-plane-wave", "--grid", "3",
                "--report-dir", str(tmp_path), cwd=tmp_path)
    assert r.returncode == 0, r.stdout + r.stderr
    report = json.loads((tmp_path / "minkowski-plane-wave.report.json").read_text())
    assert report["passed"] is True
    assert report["summary"]["failed"] == 0


def test_exit_code_one_on_failing_check(tmp_path):
    r = run_cli("run", str(FIXTURES / "failing-mass-term.json"),
                "--report-dir", str(tmp_path), cwd=tmp_path)
    assert r.returncode == 1, r.stdout + r.stderr
    report = json.loads((tmp_path / "failing-mass-term.report.json").read_text())
    assert report["passed"] is False
    failed = {c["name"] for c in report["checks"] if not c["passed"]}
    assert "representative-residual" in failed


def test_exit_code_two_on_config_error(tmp_path):
    r = run_cli("run", str(FIXTURES / "bad-tolerance.json"),
                "--report-dir", str(tmp_path), cwd=tmp_path)
    assert r.returncode == 2
    assert "configuration error" in r.stderr
    assert not list(tmp_path.glob("*.report.json"))  # no report written


def test_exit_code_two_on_unknown_suite(tmp_path):
    r = run_cli("run", "minkowski-plane-wave", "--suite", "nope",
                "--report-dir", str(tmp_path), cwd=tmp_path)
    assert r.returncode == 2


def test_expected_nonzero_diagnostic(tmp_path):
    r = run_cli("run", str(FIXTURES / "rest-source-diagnostic.json"),
                "--report-dir", str(tmp_path), cwd=tmp_path)
    assert r.returncode == 0, r.stdout + r.stderr
    report = json.loads((tmp_path / "rest-source-diagnostic.report.json").read_text())
    diag = {c["name"]: c for c in report["checks"] if c["diagnostic"]}
    assert set(diag) == {"representative-residual", "left-residual", "ideal-residual",
                         "column-residual"}
    assert all(c["passed"] for c in diag.values())


def test_reports_are_byte_identical_for_fixed_seed(tmp_path):
    d1, d2 = tmp_path / "a", tmp_path / "b"
    for d in (d1, d2):
        r = run_cli("run", "minkowski-plane-wave", "--grid", "3", "--seed", "42",
                    "--report-dir", str(d), cwd=tmp_path)
        assert r.returncode == 0
    b1 = (d1 / "minkowski-plane-wave.report.json").read_bytes()
    b2 = (d2 / "minkowski-plane-wave.report.json").read_bytes()
    assert b1 == b2


def test_seed_changes_report(tmp_path):
    d1, d2 = tmp_path / "a", tmp_path / "b"
    for d, seed in ((d1, "1"), (d2, "2")):
        r = run_cli("run", "minkowski-plane-wave", "--grid", "3", "--seed", seed,
                    "--report-dir", str(d), cwd=tmp_path)
        assert r.returncode == 0
    r1 = json.loads((d1 / "minkowski-plane-wave.report.json").read_text())
    r2 = json.loads((d2 / "minkowski-plane-wave.report.json").read_text())
    assert r1["seed"] != r2["seed"]


def test_list_suites(tmp_path):
    r = run_cli("list-suites", cwd=tmp_path)
    assert r.returncode == 0
    lines = [l for l in r.stdout.splitlines() if l and not l.startswith("(")]
    assert len(lines) == 7
    assert any(l.startswith("dirac-triad") for l in lines)
    assert "7 suites" in r.stdout


def test_report_lists_every_check_once(tmp_path):
    r = run_cli("run", "minkowski-plane-wave", "--grid", "3",
                "--report-dir", str(tmp_path), cwd=tmp_path)
    assert r.returncode == 0
    report = json.loads((tmp_path / "minkowski-plane-wave.report.json").read_text())
    keys = [(c["suite"], c["name"]) for c in report["checks"]]
    assert len(keys) == len(set(keys))
    assert {s for s, _ in keys} == {"algebra", "dirac-triad", "bilinears"}


def test_threaded_run_matches_serial(tmp_path):
    import os

    d1, d2 = tmp_path / "serial", tmp_path / "threads"
    env = dict(os.environ)
    r = run_cli("run", "minkowski-plane-wave", "--grid", "3",
                "--report-dir", str(d1), cwd=tmp_path)
    assert r.returncode == 0
    env["VERIFY_THREADS"] = "3"
    r = subprocess.run(
        [sys.executable, "-m", "sta.cli", "run", "minkowski-plane-wave",
         "--grid", "3", "--report-dir", str(d2)],
        capture_output=True, text=True, cwd=tmp_path, env=env,
    )
    assert r.returncode == 0
    assert (d1 / "minkowski-plane-wave.report.json").read_bytes() == \
        (d2 / "minkowski-plane-wave.report.json").read_bytes()
