"""Command-line front end: load a scenario, run suites, write reports.

Exit status: 0 when every check passes, 1 on any check failure, 2 on a
configuration problem (bad file, schema violation, unknown suite).
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .errors import ConfigError, StaError
from .report import Report
from .scenario import SUITE_NAMES, Scenario, builtin_scenario_names, load_config
from .suites import SUITES, run_suite


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="verify",
                                description="spacetime-algebra verification harness")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the suites of a scenario configuration")
    run.add_argument("config", help="path to a JSON scenario, or a built-in scenario name")
    run.add_argument("--suite", action="append", default=None,
                     help="restrict to this suite (repeatable)")
    run.add_argument("--grid", type=int, default=None, help="override grid density per axis")
    run.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    run.add_argument("--report-dir", default=".", help="directory for the structured report")

    sub.add_parser("list-suites", help="print the suite catalog")
    return p


def list_suites() -> int:
    for name in SUITE_NAMES:
        _, desc = SUITES[name]
        print(f"{name:12s} {desc}")
    print(f"({len(SUITE_NAMES)} suites; built-in scenarios: "
          f"{', '.join(builtin_scenario_names())})")
    return 0


def run_command(args) -> int:
    try:
        cfg = load_config(args.config)
        if args.grid is not None:
            cfg["grid"] = args.grid
        if args.seed is not None:
            cfg["seed"] = args.seed
        if args.suite:
            cfg["suites"] = args.suite
        scn = Scenario(cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2

    t0 = time.perf_counter()
    threads = int(os.environ.get("VERIFY_THREADS", "1") or "1")
    try:
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                futures = {name: pool.submit(run_suite, name, scn) for name in scn.suites}
                results = {name: f.result() for name, f in futures.items()}
        else:
            results = {name: run_suite(name, scn) for name in scn.suites}
    except StaError as exc:
        # a violated operation precondition traces back to the scenario
        print(f"configuration error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2

    report = Report(scenario=scn.name, seed=scn.seed, grid=scn.grid)
    for name in scn.suites:
        report.checks.extend(results[name])
    report.wall_time_s = time.perf_counter() - t0

    out_dir = Path(args.report_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    out_path = out_dir / f"{scn.name}.report.json"
    out_path.write_text(report.to_json_text(), encoding="utf-8")

    sys.stdout.write(report.human_text())
    sys.stdout.write(f"report: {out_path}\n")
    return 0 if report.passed else 1


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "list-suites":
        return list_suites()
    return run_command(args)


if __name__ == "__main__":
    raise SystemExit(main())
