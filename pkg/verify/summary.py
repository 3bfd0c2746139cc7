# verify/summary.py
"""
Report Summary

Aggregates a verification report into pass rate, failures and the worst
violation across checks.
"""

from typing import Any, Dict

from observability.logger import log_info, log_warning


def summarize_report(report) -> Dict[str, Any]:
    """
    Aggregate statistics for a VerificationReport.

    Returns:
        Dictionary with totals, pass rate, failed check names and the
        worst violation (check name and magnitude)
    """
    total = len(report)
    if not total:
        log_warning("No checks registered in verification report")
        return {"total_checks": 0, "passed": 0, "pass_rate": 0.0, "failed": []}

    passed = sum(1 for c in report if c.passed)
    worst = max(report, key=lambda c: c.worst_violation)

    summary = {
        "total_checks": total,
        "passed": passed,
        "pass_rate": round(passed / total, 4),
        "failed": report.failed,
        "worst_check": worst.name,
        "worst_violation": worst.worst_violation,
    }

    log_info(
        f"Verification summary | "
        f"Passed: {passed}/{total} | "
        f"Worst: {worst.name} ({worst.worst_violation:.3g})"
    )
    return summary
