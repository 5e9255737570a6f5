"""Command-line front door: run replications, compare two scenarios.

Replication i uses seed `--seed + i`, so a sweep is reproducible from the
scenario file and one number.  Outputs carry no timestamps; the same
invocation always produces byte-identical documents.

Exit codes: 0 success, 2 scenario/usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .engine import simulate
from .kpi import build_report
from .policies import run_paired
from .reporting import (
    emit_berth_plan_json,
    emit_berth_plan_text,
    emit_comparison_csv,
    emit_comparison_json,
    emit_report_csv,
    emit_report_json,
    emit_summary_csv,
    emit_summary_json,
    summarize,
)
from .scenario import (
    BUILTIN_SCENARIOS,
    ScenarioConfig,
    ScenarioError,
    load_builtin_scenario,
    load_scenario_file,
)

EXIT_OK = 0
EXIT_SCENARIO = 2
EXIT_IO = 3


def _load(ref: str) -> ScenarioConfig:
    if ref in BUILTIN_SCENARIOS and not Path(ref).exists():
        return load_builtin_scenario(ref)
    return load_scenario_file(ref)


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _run_replications(scenario: ScenarioConfig, seed: int, reps: int,
                      horizon_hours: float | None, out_dir: Path,
                      formats: list[str]) -> None:
    reports = []
    for i in range(reps):
        result = simulate(scenario, seed + i, horizon_hours)
        report = build_report(result, scenario)
        reports.append(report)
        rep_dir = out_dir / f"rep_{i:03d}"
        if "csv" in formats:
            _write(rep_dir / "report.csv", emit_report_csv(report))
        if "json" in formats:
            _write(rep_dir / "report.json", emit_report_json(report))
        _write(rep_dir / "berth_plan.txt",
               emit_berth_plan_text(result.berth_history,
                                    scenario.quay_length_m,
                                    result.horizon_ticks, report.weekly_teu))
        _write(rep_dir / "berth_plan.json",
               emit_berth_plan_json(result.berth_history,
                                    result.horizon_ticks, report.weekly_teu))
    summary = summarize(reports)
    if "json" in formats:
        _write(out_dir / "summary.json", emit_summary_json(summary))
    if "csv" in formats:
        _write(out_dir / "summary.csv", emit_summary_csv(summary))


def _cmd_run(args: argparse.Namespace) -> int:
    scenario = _load(args.scenario)
    formats = ["csv", "json"] if args.format == "all" else [args.format]
    _run_replications(scenario, args.seed, args.reps, args.horizon_hours,
                      Path(args.out), formats)
    return EXIT_OK


def _cmd_compare(args: argparse.Namespace) -> int:
    reps_a = args.reps_a if args.reps_a is not None else args.reps
    reps_b = args.reps_b if args.reps_b is not None else args.reps
    if reps_a != reps_b:
        print(f"error: replication counts differ ({reps_a} vs {reps_b})",
              file=sys.stderr)
        return EXIT_SCENARIO
    if reps_a < 2:
        print("error: compare needs at least 2 replications", file=sys.stderr)
        return EXIT_SCENARIO
    scenario_a = _load(args.scenario_a)
    scenario_b = _load(args.scenario_b)
    if args.horizon_hours is not None:
        from dataclasses import replace
        scenario_a = replace(scenario_a, horizon_hours=args.horizon_hours)
        scenario_b = replace(scenario_b, horizon_hours=args.horizon_hours)
    seeds = [args.seed + i for i in range(reps_a)]
    comparison = run_paired(scenario_a, scenario_b, seeds)
    out_dir = Path(args.out)
    formats = ["csv", "json"] if args.format == "all" else [args.format]
    if "json" in formats:
        _write(out_dir / "compare.json", emit_comparison_json(comparison))
    if "csv" in formats:
        _write(out_dir / "compare.csv", emit_comparison_csv(comparison))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="portsim",
        description="Deterministic container-terminal simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one scenario, one or more replications")
    run_p.add_argument("--scenario", required=True,
                       help="scenario file path or builtin name "
                            f"({', '.join(BUILTIN_SCENARIOS)})")
    run_p.add_argument("--seed", type=int, default=1)
    run_p.add_argument("--reps", type=int, default=1)
    run_p.add_argument("--horizon-hours", type=float, default=None)
    run_p.add_argument("--out", default="out")
    run_p.add_argument("--format", choices=["csv", "json", "all"], default="all")
    run_p.set_defaults(func=_cmd_run)

    cmp_p = sub.add_parser("compare",
                           help="paired comparison of two scenarios "
                                "under common random numbers")
    cmp_p.add_argument("--scenario-a", required=True)
    cmp_p.add_argument("--scenario-b", required=True)
    cmp_p.add_argument("--seed", type=int, default=1)
    cmp_p.add_argument("--reps", type=int, default=30)
    cmp_p.add_argument("--reps-a", type=int, default=None)
    cmp_p.add_argument("--reps-b", type=int, default=None)
    cmp_p.add_argument("--horizon-hours", type=float, default=None)
    cmp_p.add_argument("--out", default="out")
    cmp_p.add_argument("--format", choices=["csv", "json", "all"], default="all")
    cmp_p.set_defaults(func=_cmd_compare)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "reps", 1) < 1:
        print("error: --reps must be >= 1", file=sys.stderr)
        return EXIT_SCENARIO
    try:
        return args.func(args)
    except ScenarioError as exc:
        for problem in exc.errors:
            print(f"scenario error: {problem}", file=sys.stderr)
        return EXIT_SCENARIO
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
