"""Report serialization: JSON (schema version 1), CSV tables, and figures.

Everything written here is deterministic for a fixed configuration:
integers are exact, reals are rounded to 15 significant digits, orderings
are inherited from the deterministic pipeline, and no timestamps are
embedded.  Figures are rendered straight to files with the Agg backend.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .bounds import BoundsReport, DeterministicStrategy
from .scenario import ScanResult, Scenario, VerificationLedger

SCHEMA_VERSION = 1


def round15(value: float) -> float:
    """Round to 15 significant digits for stable report output."""
    return float(f"{float(value):.15g}")


def _strategy_dict(strategy: DeterministicStrategy) -> dict:
    # observables are reported 1-based, outcomes 0-based
    return {
        "alice": {str(alpha + 1): int(l) for alpha, l in enumerate(strategy.alice)},
        "bob": {str(beta + 1): int(l) for beta, l in enumerate(strategy.bob)},
    }


def _element_dict(table, index: int) -> dict:
    perm = table.element(index)
    return {"cycles": perm.cycle_string(), "images": list(perm.images)}


def _scenario_dict(scenario: Scenario) -> dict:
    table = scenario.table
    return {
        "config": scenario.config.describe(),
        "group_order": len(table),
        "representation_dim": scenario.rep.dim,
        "observables_per_party": scenario.dec.k,
        "cyclic_generator": _element_dict(table, scenario.dec.generator),
        "coset_representatives": [
            _element_dict(table, r) for r in scenario.dec.representatives
        ],
        "seed_ambient": (
            [float(v) for v in scenario.seed.ambient]
            if scenario.seed.ambient is not None
            else None
        ),
        "seed_coords": [float(v) for v in scenario.seed.coords],
        # labeled orbit vectors v[alpha][l], echoed to full precision
        "orbit_vectors": [
            [[float(c) for c in vec] for vec in block]
            for block in scenario.orbit.vectors
        ],
        "orbit_hash": scenario.orbit_hash(),
    }


def bounds_report_dict(scenario: Scenario, report: BoundsReport) -> dict:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "kind": "bounds",
        "scenario": _scenario_dict(scenario),
        "shifts": [_element_dict(scenario.table, s) for s in scenario.shifts],
        "classical": {
            "bound": int(report.classical_bound),
            "optimal_strategy": _strategy_dict(report.optimal_strategy),
        },
        "quantum": {
            "bound": round15(report.quantum_bound),
            "witness": [round15(v) for v in report.witness],
            "chi_eigenvalue": round15(report.chi_eigenvalue),
        },
        "margin": round15(report.margin),
        "violation": bool(report.violation),
    }
    if report.hall_matching is not None:
        payload["classical"]["hall_matching"] = [
            {"alpha": alpha + 1, "outcome": int(l)} for alpha, l in report.hall_matching
        ]
    if report.per_irrep is not None:
        payload["quantum"]["per_irrep"] = {
            label: round15(value) for label, value in report.per_irrep.items()
        }
    return payload


def scan_result_dict(result: ScanResult) -> dict:
    table = result.scenario.table
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "scan",
        "scenario": _scenario_dict(result.scenario),
        "rows": [
            {
                "shift": row.shift_label,
                "shift_images": list(table.element(row.shift).images),
                "order": row.shift_order,
                "classical": int(row.classical),
                "quantum": round15(row.quantum),
                "margin": round15(row.margin),
                "violation": bool(row.violation),
            }
            for row in result.rows
        ],
        "violating_classes": [
            [table.element(g).cycle_string() for g in cls]
            for cls in result.violating_classes
        ],
        "equivalence_classes": [
            [table.element(g).cycle_string() for g in cls] for cls in result.classes
        ],
    }


def verification_dict(ledger: VerificationLedger) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "verify",
        "scenario": _scenario_dict(ledger.scenario),
        "passed": ledger.passed,
        "checks": [
            {"name": c.name, "passed": c.passed, "detail": c.detail}
            for c in ledger.checks
        ],
    }


def write_json(path: str | Path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def write_scan_csv(path: str | Path, result: ScanResult) -> None:
    """The scan table: shift, order, classical, quantum, margin, violation."""
    with Path(path).open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["shift", "order", "classical", "quantum", "margin", "violation"])
        for row in result.rows:
            writer.writerow(
                [
                    row.shift_label,
                    row.shift_order,
                    row.classical,
                    f"{round15(row.quantum):.15g}",
                    f"{round15(row.margin):.15g}",
                    str(row.violation).lower(),
                ]
            )


def write_bounds_csv(path: str | Path, scenario: Scenario, report: BoundsReport) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(
            ["shifts", "classical", "quantum", "margin", "violation", "chi_eigenvalue"]
        )
        shifts = " ".join(
            scenario.table.element(s).cycle_string() for s in scenario.shifts
        )
        writer.writerow(
            [
                shifts,
                report.classical_bound,
                f"{round15(report.quantum_bound):.15g}",
                f"{round15(report.margin):.15g}",
                str(report.violation).lower(),
                f"{round15(report.chi_eigenvalue):.15g}",
            ]
        )


def _figure_modules():
    import matplotlib

    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt

    return plt


def render_scan_figure(result: ScanResult, path: str | Path) -> None:
    """Bar chart of classical vs quantum bounds per shift, violations flagged."""
    plt = _figure_modules()
    rows = sorted(result.rows, key=lambda r: r.shift)
    labels = [r.shift_label for r in rows]
    positions = np.arange(len(rows))
    width = 0.38

    fig, ax = plt.subplots(figsize=(max(6.0, 1.1 * len(rows)), 4.0))
    ax.bar(positions - width / 2, [r.classical for r in rows], width,
           label="classical bound", color="#4878cf")
    bars = ax.bar(positions + width / 2, [r.quantum for r in rows], width,
                  label="quantum bound", color="#d65f5f")
    for bar, row in zip(bars, rows):
        if row.violation:
            ax.annotate("violation", (bar.get_x() + bar.get_width() / 2, bar.get_height()),
                        ha="center", va="bottom", fontsize=8)
    ax.set_xticks(positions)
    ax.set_xticklabels(labels, rotation=30, ha="right")
    ax.set_xlabel("orbit shift")
    ax.set_ylabel("bound on the probability sum")
    ax.set_title("Two-orbit scan: classical vs quantum bounds")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_bounds_figure(scenario: Scenario, report: BoundsReport, path: str | Path) -> None:
    """Spectrum of the orbit operator with the classical bound marked."""
    from .bounds import assemble_bell_operator

    plt = _figure_modules()
    op = assemble_bell_operator(scenario.product_orbits())
    eigenvalues, _ = op.spectrum()

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.bar(np.arange(len(eigenvalues)), eigenvalues, color="#d65f5f",
           label="operator spectrum")
    ax.axhline(report.classical_bound, color="#4878cf", linestyle="--",
               label=f"classical bound = {report.classical_bound}")
    ax.set_xlabel("eigenvalue index (descending)")
    ax.set_ylabel("eigenvalue")
    title = "violation" if report.violation else "no violation"
    ax.set_title(f"Orbit operator spectrum ({title})")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
