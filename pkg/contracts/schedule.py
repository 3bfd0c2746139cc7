"""
Per-type nonlinear price schedules p_θ(q).

On-path points come from the mechanism: p_θ(q*(θ, v)) equals the payment
at v. Off-path values follow one rule everywhere:

    q = 0            → ``zero_payment`` (the decline option, or the budget)
    0 < q < q_min    → flat at the smallest on-path payment
    between points   → piecewise linear
    q > q_max        → last point plus ``tail_price`` per extra unit
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from numerics import PreconditionError


@dataclass(frozen=True)
class PriceSchedule:
    quantities: np.ndarray
    payments: np.ndarray
    zero_payment: float = 0.0
    tail_price: float = float("inf")
    values: Optional[np.ndarray] = field(default=None, compare=False)

    def __post_init__(self):
        q = np.asarray(self.quantities, dtype=float).ravel()
        p = np.asarray(self.payments, dtype=float).ravel()
        if q.size == 0 or q.size != p.size:
            raise PreconditionError("schedule needs matching, non-empty q and p arrays")
        if np.any(q < 0):
            raise PreconditionError("schedule quantities must be non-negative")
        if np.any(np.diff(q) <= 0):
            raise PreconditionError("schedule quantities must be strictly increasing")
        zero = float(p[0]) if q[0] == 0 else float(self.zero_payment)
        object.__setattr__(self, "quantities", q)
        object.__setattr__(self, "payments", p)
        object.__setattr__(self, "zero_payment", zero)

    @classmethod
    def from_path(
        cls,
        quantities,
        payments,
        zero_payment: float = 0.0,
        tail_price: float = float("inf"),
        values=None,
    ) -> "PriceSchedule":
        """
        Build from equilibrium points ordered by v, dropping repeated
        quantities (flat stretches of the allocation).
        """
        q = np.asarray(quantities, dtype=float).ravel()
        p = np.asarray(payments, dtype=float).ravel()
        # keep points that raise the running maximum; a regular mechanism never
        # decreases, so this only drops flat stretches
        previous = np.concatenate([[-np.inf], np.maximum.accumulate(q)[:-1]])
        keep = q > previous
        vals = None if values is None else np.asarray(values, dtype=float).ravel()[keep]
        return cls(q[keep], p[keep], zero_payment, tail_price, vals)

    @property
    def min_quantity(self) -> float:
        """Smallest equilibrium quantity q*(θ, v̲(θ))."""
        return float(self.quantities[0])

    @property
    def min_payment(self) -> float:
        return float(min(self.zero_payment, self.payments.min()))

    def payment(self, q):
        q = np.asarray(q, dtype=float)
        q_lo, q_hi = self.quantities[0], self.quantities[-1]
        inside = np.interp(q, self.quantities, self.payments)
        with np.errstate(invalid="ignore"):
            above = self.payments[-1] + self.tail_price * (q - q_hi)
        out = np.where(q > q_hi, above, inside)
        out = np.where(q < q_lo, self.payments[0], out)
        return np.where(q <= 0, self.zero_payment, out)

    __call__ = payment

    def min_quantity_at_budget(self, tol: float = 1e-12) -> float:
        """Largest quantity whose price does not exceed the minimum payment."""
        budget = self.min_payment + tol
        affordable = np.flatnonzero(self.payments <= budget)
        if affordable.size == 0:
            return 0.0
        return float(self.quantities[affordable[-1]])

    def is_nondecreasing(self, tol: float = 1e-9) -> bool:
        steps = np.diff(np.concatenate([[self.zero_payment], self.payments]))
        return bool(np.all(steps >= -tol))

    def __len__(self) -> int:
        return int(self.quantities.size)
