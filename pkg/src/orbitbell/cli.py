"""Command-line interface.

Subcommands:
  solve-seed --n N          solve the seed equations for S_n
  bounds --config FILE      classical vs quantum bounds for one scenario
  scan --config FILE        two-orbit scan over every shift element
  verify --config FILE      run the invariant suite against a scenario

Exit codes: 0 success, 2 configuration error, 3 enumeration budget
exceeded, 4 verification failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import reports
from .bounds import BudgetError
from .orbits import SeedError, check_regular, seed_constraints, solve_seed
from .representations import standard_representation
from .scenario import (
    ConfigError,
    ScenarioConfig,
    run_bounds,
    run_scan,
    run_verify,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BUDGET = 3
EXIT_VERIFY = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbitbell",
        description="Group-orbit Bell scenarios: bounds, certificates, scans.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    seed_cmd = sub.add_parser("solve-seed", help="Solve the seed equations for S_n")
    seed_cmd.add_argument("--n", type=int, required=True, help="Symmetric group degree")
    seed_cmd.add_argument("--json", type=Path, default=None, help="Write the seed as JSON")

    for name, help_text in [
        ("bounds", "Compute classical and quantum bounds for a scenario"),
        ("scan", "Scan two-orbit scenarios over every shift element"),
        ("verify", "Run the invariant suite against a scenario"),
    ]:
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", type=Path, required=True, help="Scenario JSON file")
        cmd.add_argument("--json", type=Path, default=None, help="Write a JSON report")
        if name != "verify":
            cmd.add_argument("--csv", type=Path, default=None, help="Write a CSV table")
            cmd.add_argument("--plot", type=Path, default=None, help="Render a figure file")
        cmd.add_argument("--tolerance", type=float, default=None,
                         help="Override the config tolerance")
        cmd.add_argument("--budget", type=int, default=None,
                         help="Override the enumeration budget")
    return parser


def _load_config(args: argparse.Namespace) -> ScenarioConfig:
    config = ScenarioConfig.from_file(args.config)
    overrides = {}
    if args.tolerance is not None:
        if args.tolerance <= 0:
            raise ConfigError("tolerance must be positive")
        overrides["tolerance"] = args.tolerance
    if args.budget is not None:
        if args.budget <= 0:
            raise ConfigError("budget must be positive")
        overrides["budget"] = args.budget
    if overrides:
        from dataclasses import replace

        config = replace(config, **overrides)
    return config


def _cmd_solve_seed(args: argparse.Namespace) -> int:
    if not 3 <= args.n <= 8:
        raise ConfigError(f"--n must be in 3..8, got {args.n}")
    seed = solve_seed(args.n)
    rep = standard_representation(args.n)
    residuals = seed_constraints(seed.ambient)
    regularity = check_regular(rep, seed)
    print(f"seed for S_{args.n} (ambient coordinates):")
    print("  x =", " ".join(f"{v:.15g}" for v in seed.ambient))
    print("  representation coordinates:", " ".join(f"{v:.15g}" for v in seed.coords))
    print(f"  max constraint residual: {np.max(np.abs(residuals)):.3e}")
    print(f"  regular orbit: {regularity.regular} "
          f"(min image distance {regularity.min_distance:.3e})")
    if args.json is not None:
        payload = {
            "schema_version": reports.SCHEMA_VERSION,
            "kind": "seed",
            "n": args.n,
            "ambient": [reports.round15(v) for v in seed.ambient],
            "coords": [reports.round15(v) for v in seed.coords],
            "constraint_residuals": [reports.round15(v) for v in residuals],
            "regular": regularity.regular,
        }
        reports.write_json(args.json, payload)
        print(f"wrote {args.json}")
    return EXIT_OK


def _cmd_bounds(args: argparse.Namespace) -> int:
    config = _load_config(args)
    scenario, report = run_bounds(config)
    shifts = " ".join(
        scenario.table.element(s).cycle_string() for s in scenario.shifts
    )
    print(f"scenario: |G| = {len(scenario.table)}, m = {scenario.rep.dim}, "
          f"k = {scenario.dec.k}, shifts: {shifts}")
    print(f"classical bound: {report.classical_bound}")
    print(f"quantum bound:   {report.quantum_bound:.12g}")
    print(f"margin:          {report.margin:+.12g}")
    print(f"violation:       {report.violation}")
    if report.per_irrep is not None:
        parts = ", ".join(f"{k} = {v:.9g}" for k, v in report.per_irrep.items())
        print(f"per-irrep eigenvalues: {parts}")
    if args.json is not None:
        reports.write_json(args.json, reports.bounds_report_dict(scenario, report))
        print(f"wrote {args.json}")
    if args.csv is not None:
        reports.write_bounds_csv(args.csv, scenario, report)
        print(f"wrote {args.csv}")
    if args.plot is not None:
        reports.render_bounds_figure(scenario, report, args.plot)
        print(f"wrote {args.plot}")
    return EXIT_OK


def _cmd_scan(args: argparse.Namespace) -> int:
    config = _load_config(args)
    result = run_scan(config)
    print(f"{'shift':<14}{'order':>6}{'classical':>11}{'quantum':>14}"
          f"{'margin':>15}  violation")
    for row in result.rows:
        print(f"{row.shift_label:<14}{row.shift_order:>6}{row.classical:>11}"
              f"{row.quantum:>14.9g}{row.margin:>+15.6g}  {row.violation}")
    if result.violating_classes:
        table = result.scenario.table
        rendered = [
            "{" + ", ".join(table.element(g).cycle_string() for g in cls) + "}"
            for cls in result.violating_classes
        ]
        print(f"violating classes (detected symmetries): {'; '.join(rendered)}")
    else:
        print("no violating shifts found")
    if args.json is not None:
        reports.write_json(args.json, reports.scan_result_dict(result))
        print(f"wrote {args.json}")
    if args.csv is not None:
        reports.write_scan_csv(args.csv, result)
        print(f"wrote {args.csv}")
    if args.plot is not None:
        reports.render_scan_figure(result, args.plot)
        print(f"wrote {args.plot}")
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    config = _load_config(args)
    ledger = run_verify(config)
    for check in ledger.checks:
        status = "PASS" if check.passed else "FAIL"
        print(f"[{status}] {check.name}: {check.detail}")
    if args.json is not None:
        reports.write_json(args.json, reports.verification_dict(ledger))
        print(f"wrote {args.json}")
    if not ledger.passed:
        failed = sum(1 for c in ledger.checks if not c.passed)
        print(f"verification FAILED ({failed} of {len(ledger.checks)} checks)")
        return EXIT_VERIFY
    print(f"verification passed ({len(ledger.checks)} checks)")
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "solve-seed": _cmd_solve_seed,
        "bounds": _cmd_bounds,
        "scan": _cmd_scan,
        "verify": _cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SeedError as exc:
        print(f"seed error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BudgetError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
