"""Result serialization: CSV for curves, JSON for full provenance.

Both formats are written from the same row dictionaries, and floats are
rendered with repr() in the CSV, which is the exact digit string
json.dumps() uses. A numeric cell therefore carries identical text in both
files, and reruns with the same seed produce identical bytes.
"""

from __future__ import annotations

import json
import math

import numpy as np

from ._version import __version__
from .estimators import MeasureSet, MeanArcEstimate, SweepResult
from .formulas import (
    ShapeSummary,
    blaschke_arc_measure,
    containment_measure,
    poincare_crossing_measure,
    santalo_total_measure,
)

SWEEP_COLUMNS = [
    "lambda",
    "area_ratio",
    "per_arc_mean",
    "per_arc_stderr",
    "per_traj_mean",
    "normalized_per_arc",
    "eq5",
    "eq3",
    "mazzolo",
    "n_intersecting",
    "n_contained",
    "n_covering",
    "n_disjoint",
]

VERIFY_COLUMNS = ["measure", "estimate", "std_error", "target", "z", "status"]

Z_FAIL = 4.0


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(path: str, fieldnames, rows) -> None:
    lines = [",".join(fieldnames)]
    for row in rows:
        lines.append(",".join(_cell(row[name]) for name in fieldnames))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_json(path: str, payload) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def sweep_row_dict(row) -> dict:
    est: MeanArcEstimate = row.estimate
    return {
        "lambda": float(row.lam),
        "area_ratio": float(row.area_ratio),
        "per_arc_mean": float(est.per_arc_mean),
        "per_arc_stderr": float(est.per_arc_stderr),
        "per_traj_mean": float(est.per_trajectory_mean),
        "normalized_per_arc": float(est.normalized_per_arc),
        "eq5": float(row.small_trajectory),
        "eq3": float(row.cauchy),
        "mazzolo": float(row.mazzolo),
        "n_intersecting": int(est.intersecting_count),
        "n_contained": int(est.contained_count),
        "n_covering": int(est.covering_count),
        "n_disjoint": int(est.disjoint_count),
    }


def sweep_payload(result: SweepResult, meta: dict) -> dict:
    return {
        "command": "sweep",
        "version": __version__,
        **meta,
        "domain_area": result.domain_summary.area,
        "domain_perimeter": result.domain_summary.perimeter,
        "trajectory_area": result.trajectory_summary.area,
        "trajectory_perimeter": result.trajectory_summary.perimeter,
        "rows": [sweep_row_dict(r) for r in result.rows],
    }


def verify_rows(measures: MeasureSet, domain, trajectory) -> tuple[list, list]:
    """Comparison rows for the closed-form checks, plus human notices.

    The overlap and containment targets only hold for convex pairs, and the
    containment identity additionally requires a non-negative target (it
    assumes pairwise crossings and no covering placements); out-of-scope
    rows are emitted with status "skipped" so the table shape is stable.
    """
    d = ShapeSummary.of(domain)
    t = ShapeSummary.of(trajectory)
    convex_pair = domain.is_convex and trajectory.is_convex
    notices = []

    def row(name, est, target):
        if est.std_error > 0.0:
            z = (est.value - target) / est.std_error
        else:
            z = 0.0 if est.value == target else math.copysign(math.inf, est.value - target)
        return {
            "measure": name,
            "estimate": est.value,
            "std_error": est.std_error,
            "target": target,
            "z": z,
            "status": "ok" if abs(z) <= Z_FAIL else "fail",
        }

    def skipped(name, est, why):
        notices.append(f"{name}: skipped ({why})")
        return {
            "measure": name,
            "estimate": est.value,
            "std_error": est.std_error,
            "target": None,
            "z": None,
            "status": "skipped",
        }

    rows = [
        row("inside_arc_length", measures.arc_length, blaschke_arc_measure(d, t)),
        row("boundary_crossings", measures.crossings, poincare_crossing_measure(d, t)),
    ]
    if convex_pair:
        rows.append(row("overlap_events", measures.overlap, santalo_total_measure(d, t)))
        nc_target = containment_measure(d, t)
        if nc_target >= 0.0:
            rows.append(row("containment_events", measures.contained, nc_target))
        else:
            rows.append(
                skipped(
                    "containment_events",
                    measures.contained,
                    "closed form is negative at this size ratio; identity out of regime",
                )
            )
    else:
        rows.append(skipped("overlap_events", measures.overlap, "needs a convex pair"))
        rows.append(skipped("containment_events", measures.contained, "needs a convex pair"))
    return rows, notices


def format_table(rows, columns) -> str:
    """Fixed-width text table for terminal output."""
    cells = [[_cell(r[c]) for c in columns] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(columns)]
    out = ["  ".join(c.ljust(w) for c, w in zip(columns, widths))]
    for row in cells:
        out.append("  ".join(c.ljust(w) for c, w in zip(row, widths)))
    return "\n".join(out)
