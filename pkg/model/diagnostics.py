"""
Diagnostic reports for the distributional assumptions.

Violations are data: a failed check returns a report listing where the
assumption breaks, it never raises.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List

import numpy as np

from numerics import as_points
from numerics.grids import DEFAULT_MONOTONE_TOL, GridLike
from observability.logger import log_info, log_warning

from .families import ConditionalValueFamily

MAX_LISTED_VIOLATIONS = 25


@dataclass
class DiagnosticReport:
    name: str
    passed: bool
    tolerance: float
    checked: int = 0
    violation_count: int = 0
    worst_violation: float = 0.0
    violations: List[Dict[str, Any]] = field(default_factory=list)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "check": self.name,
            "pass": self.passed,
            "tolerance": self.tolerance,
            "checked": self.checked,
            "violation_count": self.violation_count,
            "worst_violation": self.worst_violation,
            "violations": self.violations,
        }

    def __bool__(self) -> bool:
        return self.passed


def build_report(
    name: str, records: List[Dict[str, Any]], checked: int, tolerance: float
) -> DiagnosticReport:
    """Sort violation records by magnitude and keep the worst few."""
    records = sorted(records, key=lambda r: -r["magnitude"])
    report = DiagnosticReport(
        name=name,
        passed=not records,
        tolerance=tolerance,
        checked=checked,
        violation_count=len(records),
        worst_violation=records[0]["magnitude"] if records else 0.0,
        violations=records[:MAX_LISTED_VIOLATIONS],
    )
    if report.passed:
        log_info(f"✅ [{name}] passed", checked=checked)
    else:
        log_warning(
            f"⚠️ [{name}] {len(records)} violations | worst {report.worst_violation:.3g}"
        )
    return report


def fosd_check(
    family: ConditionalValueFamily,
    theta_grid: GridLike,
    v_grid: GridLike,
    tol: float = DEFAULT_MONOTONE_TOL,
) -> DiagnosticReport:
    """G(v | θ) ≤ G(v | θ′) for every θ > θ′ on the grid."""
    thetas = as_points(theta_grid)
    values = as_points(v_grid)
    table = family.cdf(thetas[:, None], values[None, :])

    # gap[i, j, k] = G(v_k | θ_i) − G(v_k | θ_j), required ≤ tol for i > j
    gap = table[:, None, :] - table[None, :, :]
    upper = np.tril(np.ones((thetas.size, thetas.size), dtype=bool), k=-1)
    bad = (gap > tol) & upper[:, :, None]

    records = [
        {
            "theta": float(thetas[i]),
            "theta_lower": float(thetas[j]),
            "v": float(values[k]),
            "magnitude": float(gap[i, j, k]),
        }
        for i, j, k in zip(*np.nonzero(bad))
    ]
    checked = int(upper.sum() * values.size)
    return build_report("fosd", records, checked, tol)
