# tests/test_contracts.py
"""
Production tests for the indirect implementations.

Tests cover:
- PriceSchedule off-path rules and validation
- Two-part tariff: upfront fee, usage payments, schedules
- Committed-spend contract: minimum spend, guaranteed positive quantity
- Knife-edge average price and the linear-pricing diagnostic
- Split uniqueness and marginal-price monotonicity
"""

import numpy as np
import pytest

from contracts import (
    PriceSchedule,
    build_committed_spend,
    guaranteed_positive_quantity,
    knife_edge_average_price,
    linear_pricing_diagnostic,
    marginal_price_monotonicity,
    sample_paths,
    uniqueness_condition,
    unit_prices,
)
from mechanism import DirectMechanism
from model import Environment, SignalDistribution
from numerics import Grid, PreconditionError
from virtual import CallableVirtualValueField


@pytest.fixture
def stepped_schedule():
    """Fixture providing a schedule on q ∈ {1, 2} with a decline payment of ½."""
    return PriceSchedule(np.array([1.0, 2.0]), np.array([1.0, 3.0]), zero_payment=0.5)


# =============================================================================
# PriceSchedule
# =============================================================================


def test_schedule_off_path_rules(stepped_schedule):
    """Test decline, below-minimum, interpolated and beyond-maximum prices."""
    payments = stepped_schedule.payment(np.array([0.0, 0.5, 1.5, 2.0, 3.0]))
    np.testing.assert_allclose(payments[:4], [0.5, 1.0, 2.0, 3.0])
    assert np.isinf(payments[4])


def test_schedule_tail_price():
    """Test a finite tail price extends the last point linearly."""
    schedule = PriceSchedule(np.array([1.0, 2.0]), np.array([1.0, 3.0]), tail_price=2.0)
    assert float(schedule(3.0)) == pytest.approx(5.0)


def test_schedule_minimums(stepped_schedule):
    """Test minimum quantity, minimum payment and what the minimum payment buys."""
    assert stepped_schedule.min_quantity == 1.0
    assert stepped_schedule.min_payment == 0.5
    assert stepped_schedule.min_quantity_at_budget() == 0.0
    budgeted = PriceSchedule(
        np.array([1.0, 2.0]), np.array([1.0, 3.0]), zero_payment=1.0
    )
    assert budgeted.min_quantity_at_budget() == 1.0


def test_schedule_from_path_drops_flat_stretches():
    """Test repeated quantities keep only their first point."""
    schedule = PriceSchedule.from_path(
        [0.0, 0.0, 1.0, 2.0], [0.0, 0.0, 1.0, 3.0], values=[0.5, 0.6, 0.7, 0.8]
    )
    np.testing.assert_allclose(schedule.quantities, [0.0, 1.0, 2.0])
    np.testing.assert_allclose(schedule.values, [0.5, 0.7, 0.8])
    assert len(schedule) == 3
    assert schedule.is_nondecreasing()


def test_schedule_validation():
    """Test empty, negative and non-increasing quantity arrays are refused."""
    with pytest.raises(PreconditionError):
        PriceSchedule(np.array([]), np.array([]))
    with pytest.raises(PreconditionError):
        PriceSchedule(np.array([-1.0, 1.0]), np.array([0.0, 1.0]))
    with pytest.raises(PreconditionError):
        PriceSchedule(np.array([1.0, 1.0]), np.array([0.0, 1.0]))
    falling = PriceSchedule(np.array([1.0, 2.0]), np.array([1.0, 0.5]))
    assert not falling.is_nondecreasing()


# =============================================================================
# Equilibrium paths
# =============================================================================


def test_sample_paths(mech, thetas):
    """Test each row spans the type's own support and carries a tail price."""
    paths = sample_paths(mech, thetas, 5)
    assert paths.values.shape == (11, 5)
    np.testing.assert_allclose(paths.values[-1], [1.0, 1.25, 1.5, 1.75, 2.0])
    assert np.isinf(paths.tail_prices[0])
    assert paths.tail_prices[-1] == pytest.approx(1.0)


def test_unit_prices_helper(mech):
    """Test unit prices at θ ∈ {1.25, 1.5, 2}."""
    np.testing.assert_allclose(unit_prices(mech, [1.25, 1.5, 2.0]), [2.5, 1.5, 1.0])


# =============================================================================
# Two-part tariff
# =============================================================================


def test_tariff_upfront_fee(tariff):
    """Test t₀(θ̲) = 0 and t₀(2) = 11/48."""
    fees = tariff.upfront_values
    assert fees[0] == pytest.approx(0.0, abs=1e-14)
    assert fees[-1] == pytest.approx(11 / 48, abs=1e-12)
    assert np.all(np.diff(fees) >= -1e-12)


def test_tariff_usage_payment(tariff):
    """Test t₁(2, 1) = 5/16 and t₀ + t₁ = t."""
    assert float(tariff.period_payment(2.0, 1.0)) == pytest.approx(5 / 16, abs=1e-12)
    assert float(tariff.total_payment(2.0, 1.0)) == pytest.approx(13 / 24, abs=1e-12)


def test_tariff_schedules_replicate_transfers(mech, tariff):
    """Test t₀ + p_θ(q*(θ, v)) = t(θ, v) along every sampled path."""
    for i, theta in enumerate(tariff.thetas):
        values = tariff.schedules[i].values
        np.testing.assert_allclose(
            tariff.schedule_payment(i, values), mech.transfer(theta, values), atol=1e-12
        )


def test_tariff_schedule_charges_at_minimum_quantity(tariff):
    """Test the top type already pays t₁(2, 1) = 5/16 for q_min = ¼, p(0) = 0."""
    top = tariff.schedules[-1]
    assert top.zero_payment == 0.0
    assert top.min_quantity == pytest.approx(0.25)
    assert float(top.payment(0.25)) == pytest.approx(5 / 16, abs=1e-12)


def test_tariff_frame(tariff):
    """Test the exported columns and the θ = 2 row."""
    frame = tariff.frame()
    assert list(frame.columns) == ["theta", "t0", "unit_price"]
    assert frame["t0"].iloc[-1] == pytest.approx(0.229166667, abs=1e-9)
    assert frame["unit_price"].iloc[-1] == pytest.approx(1.0)


# =============================================================================
# Committed spend
# =============================================================================


def test_committed_budget(committed):
    """Test B(θ̲) = 0, B(2) = 13/24 and B(θ) = (θ − 1)(3θ + 7)/24."""
    budgets = committed.budget_values
    expected = (committed.thetas - 1) * (3 * committed.thetas + 7) / 24
    np.testing.assert_allclose(budgets, expected, atol=1e-12)
    assert budgets[0] == 0.0
    assert budgets[-1] == pytest.approx(13 / 24, abs=1e-12)


def test_committed_schedule_minimum_spend(committed):
    """Test declining still costs the budget and the budget buys q_min."""
    top = committed.schedules[-1]
    assert top.zero_payment == pytest.approx(13 / 24, abs=1e-12)
    assert top.min_payment == pytest.approx(13 / 24, abs=1e-12)
    assert top.min_quantity_at_budget() == pytest.approx(0.25)


def test_revenue_equivalence(mech, tariff, committed):
    """Test both implementations earn the mechanism's profit 7/36."""
    assert tariff.seller_profit() == pytest.approx(7 / 36, abs=1e-10)
    assert committed.seller_profit() == pytest.approx(7 / 36, abs=1e-10)


def test_guaranteed_positive_quantity(committed, shifted_mech):
    """Test every type above θ̲ buys a positive quantity unless it is excluded."""
    assert guaranteed_positive_quantity(committed)
    shifted = build_committed_spend(shifted_mech, Grid.linspace(0.5, 1.5, 11), 11)
    assert not guaranteed_positive_quantity(shifted)


def test_knife_edge_average_price(committed):
    """Test t/q at v̲: 13/6 at θ = 2, infinite at the excluded bottom type."""
    assert knife_edge_average_price(committed, 2.0) == pytest.approx(13 / 6, abs=1e-10)
    assert np.isinf(knife_edge_average_price(committed, 1.0))


def test_linear_pricing_diagnostic(committed):
    """Test average prices vary with v for served types."""
    assert not linear_pricing_diagnostic(committed, 2.0, np.linspace(1.0, 2.0, 11))
    assert linear_pricing_diagnostic(committed, 1.0, np.linspace(0.5, 1.0, 11))


def test_committed_frame(committed):
    """Test the exported columns."""
    frame = committed.frame()
    assert list(frame.columns) == ["theta", "B", "unit_price"]
    assert frame["B"].iloc[-1] == pytest.approx(13 / 24, abs=1e-12)


# =============================================================================
# Implementation diagnostics
# =============================================================================


def test_uniqueness_condition(mech):
    """Test the split is unique only where φ(θ, v̲(θ)) = 0."""
    assert uniqueness_condition(mech, 1.0)
    assert not uniqueness_condition(mech, 2.0)


def test_marginal_price_monotonicity(mech, thetas):
    """Test c·v/φ is constant in v for multiplicative values."""
    report = marginal_price_monotonicity(mech, thetas, v_points=11)
    assert report.passed
    assert report.checked == 10 * 11


def test_marginal_price_monotonicity_violation(additive_family):
    """Test φ = √v gives an increasing marginal price √v·c."""
    field = CallableVirtualValueField(lambda t, v: np.sqrt(v), 1.0, 2.0)
    mech = DirectMechanism(
        Environment(alpha=0.5, cost=1.0),
        SignalDistribution.uniform(1.0, 2.0),
        additive_family,
        field=field,
    )
    report = marginal_price_monotonicity(mech, Grid.linspace(1.1, 2.0, 4), v_points=5)
    assert not report.passed
    assert report.violations[0]["v_next"] > report.violations[0]["v"]
