"""
Check results and the verification report.

Every registered check appears exactly once; the JSON rendering is sorted
and carries no timestamps so identical runs produce identical bytes.
"""

import json
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional

import numpy as np

from model.diagnostics import DiagnosticReport
from numerics import PreconditionError


def to_plain(value: Any) -> Any:
    """numpy scalars and arrays → JSON-native values."""
    if isinstance(value, dict):
        return {str(k): to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_plain(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        if not np.isfinite(value):
            return str(value)
        return float(f"{value:.12g}")
    return value


@dataclass
class CheckResult:
    name: str
    passed: bool
    worst_violation: float
    tolerance: float
    at: Dict[str, Any] = field(default_factory=dict)
    details: Dict[str, Any] = field(default_factory=dict)

    def as_dict(self) -> Dict[str, Any]:
        out = {
            "check": self.name,
            "pass": bool(self.passed),
            "worst_violation": self.worst_violation,
            "at": self.at,
            "tolerance": self.tolerance,
        }
        if self.details:
            out["details"] = self.details
        return to_plain(out)

    @classmethod
    def from_violations(
        cls,
        name: str,
        magnitudes: np.ndarray,
        coords: List[Dict[str, Any]],
        tol: float,
        details: Optional[Dict[str, Any]] = None,
    ) -> "CheckResult":
        """Pass iff every magnitude ≤ tol; ``at`` is the worst coordinate."""
        magnitudes = np.asarray(magnitudes, dtype=float).ravel()
        if magnitudes.size == 0:
            return cls(name, True, 0.0, tol, {}, details or {})
        worst = int(np.argmax(magnitudes))
        # adding 0.0 turns a worst of -0.0 into 0.0
        value = max(float(magnitudes[worst]), 0.0) + 0.0
        return cls(
            name,
            bool(magnitudes[worst] <= tol),
            value,
            tol,
            coords[worst] if value > 0 else {},
            details or {},
        )

    @classmethod
    def from_diagnostic(cls, report: DiagnosticReport) -> "CheckResult":
        at: Dict[str, Any] = {}
        if report.violations:
            at = {k: v for k, v in report.violations[0].items() if k != "magnitude"}
        return cls(
            report.name,
            report.passed,
            report.worst_violation,
            report.tolerance,
            at,
            {"checked": report.checked, "violation_count": report.violation_count},
        )


@dataclass
class VerificationReport:
    checks: List[CheckResult] = field(default_factory=list)
    tolerances: Dict[str, float] = field(default_factory=dict)

    def add(self, check: CheckResult) -> CheckResult:
        if any(c.name == check.name for c in self.checks):
            raise PreconditionError(f"check registered twice: {check.name}")
        self.checks.append(check)
        return check

    def __iter__(self) -> Iterator[CheckResult]:
        return iter(self.checks)

    def __len__(self) -> int:
        return len(self.checks)

    def __getitem__(self, name: str) -> CheckResult:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    @property
    def names(self) -> List[str]:
        return [c.name for c in self.checks]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed(self) -> List[str]:
        return [c.name for c in self.checks if not c.passed]

    def as_dict(self) -> Dict[str, Any]:
        from .summary import summarize_report

        return {
            "checks": [c.as_dict() for c in self.checks],
            "tolerances": to_plain(self.tolerances),
            "summary": to_plain(summarize_report(self)),
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2) + "\n"
