"""
Incentive, participation and consistency checks.

Violation magnitudes are in payoff units; a check passes when the worst
magnitude is within its tolerance.
"""

from typing import Callable, Optional

import numpy as np

from contracts import CommittedSpendContract, TwoPartTariff
from frictions import CommitmentCostSolution
from mechanism import BaseMechanism, DirectMechanism
from numerics import as_points, derivative_many
from numerics.grids import GridLike, monotone_violations

from .deviation import DeviationMatrix
from .results import CheckResult

IC_TOL = 1e-7
REVENUE_TOL = 1e-10
ENVELOPE_TOL = 1e-5
ORACLE_TOL = 1e-9
PROFIT_TOL = 1e-7


def check_ic0(matrix: DeviationMatrix, tol: float = IC_TOL) -> CheckResult:
    """Truthful signal report maximizes every row."""
    gains = matrix.gains()
    best = np.argmax(gains, axis=1)
    worst_gain = gains[np.arange(gains.shape[0]), best]
    coords = [
        {
            "theta": float(matrix.thetas[i]),
            "theta_report": float(matrix.thetas[j]),
            "direction": "down" if j < i else "up",
        }
        for i, j in enumerate(best)
    ]
    return CheckResult.from_violations("ic0", worst_gain, coords, tol)


def check_diagonal_identity(
    matrix: DeviationMatrix, mech: BaseMechanism, tol: float = IC_TOL
) -> CheckResult:
    """w(θ, θ) = U(θ)."""
    utilities = np.asarray(mech.expected_utility(matrix.thetas), dtype=float)
    gap = np.abs(matrix.diagonal - utilities)
    coords = [{"theta": float(t)} for t in matrix.thetas]
    return CheckResult.from_violations("diagonal_identity", gap, coords, tol)


def check_single_crossing(matrix: DeviationMatrix, tol: float = IC_TOL) -> CheckResult:
    """θ ↦ w(θ, θ_H) − w(θ, θ_L) nondecreasing for every θ_L < θ_H."""
    w = matrix.payoffs
    n = w.shape[0]
    if n < 2:
        return CheckResult("single_crossing", True, 0.0, tol)
    # spread[i, l, h] = w(θᵢ, θ_h) − w(θᵢ, θ_l)
    spread = w[:, None, :] - w[:, :, None]
    steps = np.diff(spread, axis=0)
    pairs = np.triu(np.ones((n, n), dtype=bool), k=1)
    drops = np.where(pairs[None, :, :], -steps, -np.inf)
    i, lo, hi = np.unravel_index(int(np.argmax(drops)), drops.shape)
    worst = float(drops[i, lo, hi])
    at = {
        "theta": float(matrix.thetas[i]),
        "theta_next": float(matrix.thetas[i + 1]),
        "theta_low": float(matrix.thetas[lo]),
        "theta_high": float(matrix.thetas[hi]),
    }
    return CheckResult.from_violations("single_crossing", [worst], [at], tol)


def check_ic1(
    mech: BaseMechanism, theta: float, v_grid: GridLike, tol: float = IC_TOL
) -> CheckResult:
    """v·q(θ, v)^α − t(θ, v) ≥ v·q(θ, v′)^α − t(θ, v′) for all grid pairs."""
    values = as_points(v_grid)
    q = np.asarray(mech.quantity(theta, values), dtype=float)
    t = np.asarray(mech.transfer(theta, values), dtype=float)
    # payoff[i, j]: true value vᵢ, report vⱼ
    payoff = values[:, None] * q[None, :] ** mech.alpha - t[None, :]
    gains = payoff - np.diag(payoff)[:, None]
    best = np.argmax(gains, axis=1)
    worst_gain = gains[np.arange(values.size), best]
    coords = [
        {"theta": float(theta), "v": float(values[i]), "v_report": float(values[j])}
        for i, j in enumerate(best)
    ]
    return CheckResult.from_violations(f"ic1@{theta:.6g}", worst_gain, coords, tol)


def check_ic1_grid(
    mech: BaseMechanism, thetas, v_points: int, tol: float = IC_TOL
) -> CheckResult:
    """IC1 on every listed type, each over its own value support."""
    worst, coords, checked = [], [], []
    for theta in as_points(thetas):
        lo = float(mech.family.lower_support(theta))
        hi = float(mech.family.upper_support(theta))
        single = check_ic1(mech, theta, np.linspace(lo, hi, v_points), tol)
        worst.append(single.worst_violation)
        coords.append(single.at or {"theta": float(theta)})
        checked.append(float(theta))
    return CheckResult.from_violations(
        "ic1", worst, coords, tol, details={"thetas": checked, "v_points": v_points}
    )


def check_ir(
    mech: BaseMechanism,
    outside_option: Callable,
    theta_grid: GridLike,
    tol: float = IC_TOL,
    name: str = "ir",
) -> CheckResult:
    """U(θ) ≥ outside_option(θ); ``details.binds_at`` lists |gap| ≤ tol."""
    thetas = as_points(theta_grid)
    utilities = np.asarray(mech.expected_utility(thetas), dtype=float)
    outside = np.broadcast_to(
        np.asarray(outside_option(thetas), dtype=float), thetas.shape
    )
    gap = utilities - outside
    binds = thetas[np.abs(gap) <= tol]
    coords = [{"theta": float(t)} for t in thetas]
    return CheckResult.from_violations(
        name,
        -gap,
        coords,
        tol,
        details={"binds_at": binds.tolist(), "min_slack": float(gap.min())},
    )


def zero_outside_option(theta):
    return np.zeros_like(np.asarray(theta, dtype=float))


def check_revenue_equivalence(
    mech: BaseMechanism,
    tariff: TwoPartTariff,
    committed: CommittedSpendContract,
    tol: float = REVENUE_TOL,
) -> CheckResult:
    """Pointwise payments from both schedules match t(θ, v); profits agree."""
    magnitudes, coords = [], []
    for i, theta in enumerate(committed.thetas):
        values = committed.schedules[i].values
        if values is None:
            values = np.array([float(mech.family.lower_support(theta))])
        direct = np.asarray(mech.transfer(theta, values), dtype=float)
        via_tariff = np.asarray(tariff.schedule_payment(i, values), dtype=float)
        via_budget = np.asarray(committed.schedule_payment(i, values), dtype=float)
        gap = np.maximum(np.abs(via_tariff - direct), np.abs(via_budget - direct))
        j = int(np.argmax(gap))
        magnitudes.append(float(gap[j]))
        coords.append({"theta": float(theta), "v": float(values[j])})

    profits = {
        "direct": mech.seller_profit(),
        "tariff": tariff.seller_profit(),
        "committed": committed.seller_profit(),
    }
    spread = max(profits.values()) - min(profits.values())
    magnitudes.append(spread)
    coords.append({"profit": "spread"})
    return CheckResult.from_violations(
        "revenue_equivalence", magnitudes, coords, tol, details={"profits": profits}
    )


def check_allocation_oracle(
    mech: DirectMechanism,
    theta_grid: GridLike,
    v_grid: GridLike,
    q_points: int = 10_000,
    tol: float = ORACLE_TOL,
) -> CheckResult:
    """q* beats every point of a dense quantity grid on φ·q^α − c·q."""
    thetas = as_points(theta_grid)
    values = as_points(v_grid)
    T, V = np.meshgrid(thetas, values, indexing="ij")
    phi = mech.phi(T, V).ravel()
    q_star = mech.quantity(T, V).ravel()

    q_hi = max(1.5 * float(q_star.max()), 1.0)
    q_grid = np.linspace(0.0, q_hi, q_points)
    alpha, c = mech.alpha, mech.cost

    computed = phi * q_star**alpha - c * q_star
    brute = phi[:, None] * q_grid[None, :] ** alpha - c * q_grid[None, :]
    best = brute.max(axis=1)
    argbest = q_grid[brute.argmax(axis=1)]

    shortfall = best - computed
    coords = [
        {"theta": float(t), "v": float(v)} for t, v in zip(T.ravel(), V.ravel())
    ]
    step = q_grid[1] - q_grid[0]
    off_grid = int(np.sum(np.abs(argbest - q_star) > step))
    return CheckResult.from_violations(
        "allocation_oracle",
        shortfall,
        coords,
        tol,
        details={
            "q_points": q_points,
            "q_step": step,
            "argmax_off_by_more_than_step": off_grid,
        },
    )


def check_envelope_v(
    mech: DirectMechanism,
    theta_grid: GridLike,
    v_grid: GridLike,
    tol: float = ENVELOPE_TOL,
) -> CheckResult:
    """∂u/∂v by central difference equals q*^α."""
    thetas = as_points(theta_grid)
    values = as_points(v_grid)
    T, V = np.meshgrid(thetas, values, indexing="ij")
    slope = derivative_many(lambda v: mech.expost_utility(T, v), V)
    gap = np.abs(slope - mech.root_quantity(T, V)).ravel()
    coords = [{"theta": float(t), "v": float(v)} for t, v in zip(T.ravel(), V.ravel())]
    return CheckResult.from_violations("envelope_v", gap, coords, tol)


def check_envelope_theta(
    mech: DirectMechanism, theta_grid: GridLike, tol: float = ENVELOPE_TOL
) -> CheckResult:
    """dU/dθ by central difference equals −∫ q*^α ∂G/∂θ dv."""
    thetas = as_points(theta_grid)
    numeric = derivative_many(mech.expected_utility, thetas)
    gap = np.abs(numeric - mech.envelope_slope(thetas))
    coords = [{"theta": float(t)} for t in thetas]
    return CheckResult.from_violations("envelope_theta", gap, coords, tol)


def check_monotone(
    name: str, thetas, values, tol: float, direction: str = "increasing"
) -> CheckResult:
    thetas = np.asarray(thetas, dtype=float)
    violations = monotone_violations(values, direction, tol)
    if not violations:
        return CheckResult(name, True, 0.0, tol)
    magnitudes = [m for _, m in violations]
    coords = [
        {"theta": float(thetas[i]), "theta_next": float(thetas[i + 1])}
        for i, _ in violations
    ]
    return CheckResult.from_violations(name, magnitudes, coords, tol)


def check_profit_identity(
    mech: DirectMechanism, tol: float = PROFIT_TOL
) -> CheckResult:
    """E[t − c·q] equals the virtual surplus E[φ·q^α − c·q] − U(θ̲)."""
    profit = mech.seller_profit()
    surplus = mech.virtual_surplus()
    return CheckResult.from_violations(
        "profit_identity",
        [abs(profit - surplus)],
        [{}],
        tol,
        details={"seller_profit": profit, "virtual_surplus": surplus},
    )


def check_commitment_dominance(
    solution: CommitmentCostSolution, tol: float = PROFIT_TOL
) -> CheckResult:
    """Committed spend weakly beats every tested split; profit unchanged."""
    magnitudes = [v["magnitude"] for v in solution.violations]
    coords = [
        {"theta": v["theta"], "fraction": v["fraction"]} for v in solution.violations
    ]
    magnitudes.append(abs(solution.profit_gap))
    coords.append({"profit": "gap"})
    result = CheckResult.from_violations(
        "commitment_dominance",
        magnitudes,
        coords,
        tol,
        details={
            "gamma": solution.gamma,
            "strict": solution.strict,
            "seller_profit": solution.seller_profit,
        },
    )
    result.passed = result.passed and solution.strict
    return result


def theta_points_with(thetas, extra: Optional[float]) -> np.ndarray:
    """Grid points plus one extra abscissa, sorted and deduplicated."""
    points = np.asarray(thetas, dtype=float)
    if extra is None:
        return points
    return np.unique(np.concatenate([points, [extra]]))
