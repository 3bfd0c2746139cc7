# tests/test_model.py
"""
Production tests for the economic environment and distribution families.

Tests cover:
- Environment validation
- Bounded and signal distributions (hazard rate, mixtures)
- Multiplicative and reciprocal value families
- FOSD diagnostics
- Spot-market best response
- Tabulated families loaded from CSV
"""

import numpy as np
import pandas as pd
import pytest
from pydantic import ValidationError

from model import (
    BoundedDistribution,
    ConditionalValueFamily,
    Environment,
    MultiplicativeFamily,
    SignalDistribution,
    TabulatedFamily,
    bimodal_mixture_signal,
    fosd_check,
    load_tabulated_family,
    reciprocal_family,
    spot_best_response,
    spot_payoff,
)
from numerics import Grid, PreconditionError, UndefinedDensityError


@pytest.fixture
def uniform_shock():
    """Fixture providing the demand shock z ~ U[½, 1]."""
    return BoundedDistribution.uniform(0.5, 1.0)


# =============================================================================
# Environment
# =============================================================================


def test_environment_defaults_and_exponent():
    """Test frictions default off and 1/(1 − α) is exposed."""
    env = Environment(alpha=0.5, cost=1.0)
    assert env.gamma == 0.0
    assert env.spot_price is None
    assert env.exponent == pytest.approx(2.0)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"alpha": 1.0, "cost": 1.0},
        {"alpha": 0.0, "cost": 1.0},
        {"alpha": 0.5, "cost": 0.0},
        {"alpha": 0.5, "cost": 1.0, "gamma": -0.1},
        {"alpha": 0.5, "cost": 1.0, "spot_price": 1.0},
    ],
)
def test_environment_rejects_invalid(kwargs):
    """Test α ∉ (0, 1), c ≤ 0, γ < 0 and pˢ ≤ c are rejected."""
    with pytest.raises(ValidationError):
        Environment(**kwargs)


def test_environment_is_frozen():
    """Test the environment cannot be mutated after construction."""
    env = Environment(alpha=0.5, cost=1.0)
    with pytest.raises(ValidationError):
        env.cost = 2.0


# =============================================================================
# Distributions
# =============================================================================


def test_uniform_distribution(uniform_shock):
    """Test cdf clipping outside the support and the first two moments."""
    np.testing.assert_allclose(uniform_shock.cdf([0.0, 0.75, 2.0]), [0.0, 0.5, 1.0])
    np.testing.assert_allclose(uniform_shock.pdf([0.25, 0.75, 1.5]), [0.0, 2.0, 0.0])
    assert uniform_shock.mean() == pytest.approx(0.75)
    assert uniform_shock.moment(2) == pytest.approx(7 / 12)
    assert uniform_shock.total_mass() == pytest.approx(1.0)


def test_support_must_be_nondegenerate():
    """Test lo ≥ hi raises PreconditionError."""
    with pytest.raises(PreconditionError):
        BoundedDistribution.uniform(1.0, 1.0)


def test_signal_hazard_rate():
    """Test (1 − F)/f = 2 − θ on U[1, 2] and φ_F vanishing at θ = 1."""
    signal = SignalDistribution.uniform(1.0, 2.0)
    hazard = signal.hazard([1.0, 1.5, 2.0])
    np.testing.assert_allclose(hazard, [1.0, 0.5, 0.0], atol=1e-14)
    assert signal.theta_lo == 1.0 and signal.theta_hi == 2.0


def test_hazard_undefined_where_density_vanishes():
    """Test a zero density raises UndefinedDensityError with the offending θ."""
    beta = BoundedDistribution.beta(2.0, 2.0, 1.0, 2.0)
    signal = SignalDistribution.from_distribution(beta)
    with pytest.raises(UndefinedDensityError) as exc_info:
        signal.hazard([1.5, 1.0])
    assert exc_info.value.theta == pytest.approx(1.0)


def test_truncated_normal_mass():
    """Test truncated normals integrate to one on their support."""
    dist = BoundedDistribution.truncnorm(1.5, 0.3, 1.0, 2.0)
    assert dist.total_mass() == pytest.approx(1.0, abs=1e-10)
    assert dist.mean() == pytest.approx(1.5, abs=1e-10)


def test_uniform_mixture():
    """Test mixture weights are validated and the bimodal signal keeps f > 0."""
    with pytest.raises(PreconditionError):
        BoundedDistribution.uniform_mixture([(0.5, 0.0, 1.0), (0.4, 1.0, 2.0)])
    signal = bimodal_mixture_signal()
    assert (signal.lo, signal.hi) == (1.0, 2.0)
    assert float(signal.cdf(2.0)) == pytest.approx(1.0)
    assert float(signal.cdf(1.1)) == pytest.approx(0.46)
    assert np.all(signal.pdf(np.linspace(1.0, 2.0, 51)) > 0)


# =============================================================================
# Families
# =============================================================================


def test_multiplicative_family_closed_forms(uniform_shock):
    """Test G(1.5 | 2) = ½, ∂G/∂θ = −¾ and v̲(1.5) = 0.75."""
    family = MultiplicativeFamily(uniform_shock, 1.0, 2.0)
    assert float(family.cdf(2.0, 1.5)) == pytest.approx(0.5)
    assert float(family.pdf(2.0, 1.5)) == pytest.approx(1.0)
    assert float(family.theta_partial(2.0, 1.5)) == pytest.approx(-0.75)
    assert float(family.lower_support(1.5)) == pytest.approx(0.75)
    assert float(family.upper_support(1.5)) == pytest.approx(1.5)
    assert (family.global_lo, family.global_hi) == (0.5, 2.0)
    assert family.is_multiplicative and family.extends


def test_numeric_theta_partial_matches_closed_form(uniform_shock):
    """Test the finite-difference fallback for ∂G/∂θ."""
    closed = MultiplicativeFamily(uniform_shock, 1.0, 2.0)
    generic = ConditionalValueFamily(
        cdf=closed.cdf,
        pdf=closed.pdf,
        lower_support=closed.lower_support,
        upper_support=closed.upper_support,
        global_lo=closed.global_lo,
        global_hi=closed.global_hi,
    )
    assert float(generic.theta_partial(1.6, 1.2)) == pytest.approx(
        float(closed.theta_partial(1.6, 1.2)), abs=1e-8
    )


def test_multiplicative_family_rejects_nonpositive_theta(uniform_shock):
    """Test θ ≤ 0 is refused."""
    with pytest.raises(ValueError):
        MultiplicativeFamily(uniform_shock, 0.0, 1.0)


# =============================================================================
# FOSD
# =============================================================================


def test_fosd_passes_for_multiplicative(uniform_shock):
    """Test v = θ·z is ordered by first-order stochastic dominance."""
    family = MultiplicativeFamily(uniform_shock, 1.0, 2.0)
    thetas = Grid.linspace(1.0, 2.0, 11)
    report = fosd_check(family, thetas, Grid.linspace(0.5, 2.0, 31))
    assert report.passed
    assert report.checked == 55 * 31
    assert report.as_dict()["violation_count"] == 0


def test_fosd_fails_for_reciprocal(uniform_shock):
    """Test v = z/θ violates FOSD and reports where."""
    family = reciprocal_family(uniform_shock, 1.0, 2.0)
    thetas = Grid.linspace(1.0, 2.0, 11)
    report = fosd_check(family, thetas, Grid.linspace(0.25, 1.0, 31))
    assert not report
    assert report.worst_violation > 0
    worst = report.violations[0]
    assert worst["theta"] > worst["theta_lower"]


def test_fosd_single_type_is_vacuous(uniform_shock):
    """Test a one-point signal grid has nothing to compare."""
    family = reciprocal_family(uniform_shock, 1.0, 2.0)
    report = fosd_check(family, [1.5], Grid.linspace(0.25, 1.0, 5))
    assert report.passed and report.checked == 0


# =============================================================================
# Spot market
# =============================================================================


def test_spot_best_response():
    """Test q = (αv/p)² and payoff v²/(4p) for α = ½."""
    q, payoff = spot_best_response(2.0, 2.0, 0.5)
    assert q == pytest.approx(0.25)
    assert payoff == pytest.approx(0.5)
    assert float(spot_payoff(0.0, 2.0, 0.5)) == 0.0


def test_spot_best_response_preconditions():
    """Test negative values, non-positive prices and α outside (0, 1)."""
    with pytest.raises(PreconditionError):
        spot_best_response(-1.0, 2.0, 0.5)
    with pytest.raises(PreconditionError):
        spot_best_response(1.0, 0.0, 0.5)
    with pytest.raises(PreconditionError):
        spot_best_response(1.0, 2.0, 1.0)


# =============================================================================
# Tabulated families
# =============================================================================


def test_load_tabulated_family(example1_table):
    """Test a tabulated Example 1 reproduces the closed forms at grid nodes."""
    family = load_tabulated_family(example1_table)
    assert isinstance(family, TabulatedFamily)
    assert not family.extends
    assert float(family.cdf(2.0, 1.5)) == pytest.approx(0.5, abs=1e-12)
    assert float(family.theta_partial(2.0, 1.5)) == pytest.approx(-0.75, abs=1e-12)
    assert float(family.lower_support(2.0)) == pytest.approx(1.0, abs=1e-12)
    assert float(family.upper_support(1.0)) == pytest.approx(1.0, abs=1e-12)
    # θ/2 = 0.5125 lies between the v nodes 0.5 and 0.525
    assert float(family.lower_support(1.025)) == pytest.approx(0.5125, abs=1e-12)


def test_tabulated_family_is_one_interpolant(example1_table):
    """Test G, g and ∂G/∂θ agree off the nodes, support edges included."""
    family = load_tabulated_family(example1_table)
    theta = np.array([1.013, 1.37, 1.5, 1.881, 1.999])
    lo, hi = family.lower_support(theta), family.upper_support(theta)
    np.testing.assert_allclose(lo, theta / 2, atol=1e-12)
    np.testing.assert_allclose(hi, theta, atol=1e-12)

    T = theta[:, None]
    V = T * np.linspace(0.5, 1.0, 9)[None, :]
    np.testing.assert_allclose(family.cdf(T, V), 2 * V / T - 1, atol=1e-12)
    np.testing.assert_allclose(family.pdf(T, V), 2 / T + 0 * V, atol=1e-10)
    np.testing.assert_allclose(
        family.theta_partial(T, V), -2 * V / T**2, atol=1e-10
    )
    # Outside the support
    assert float(family.pdf(1.37, 0.6)) == 0.0
    assert float(family.cdf(1.37, 1.5)) == pytest.approx(1.0)


def test_tabulated_family_missing_file(tmp_path):
    """Test a missing table raises FileNotFoundError."""
    with pytest.raises(FileNotFoundError):
        load_tabulated_family(tmp_path / "nope.csv")


def test_tabulated_family_validation():
    """Test missing columns and ragged grids are refused."""
    with pytest.raises(PreconditionError):
        TabulatedFamily(pd.DataFrame({"theta": [1.0], "v": [1.0]}))
    ragged = pd.DataFrame(
        {
            "theta": [1.0, 1.0, 2.0],
            "v": [0.0, 1.0, 0.0],
            "G": [0.0, 1.0, 0.0],
            "g": [1.0, 1.0, 1.0],
            "dG_dtheta": [0.0, 0.0, 0.0],
        }
    )
    with pytest.raises(PreconditionError):
        TabulatedFamily(ragged)


def _square_table(cdf_rows):
    thetas, values = [1.0, 2.0], [0.0, 0.5, 1.0]
    T, V = np.meshgrid(thetas, values, indexing="ij")
    return pd.DataFrame(
        {
            "theta": T.ravel(),
            "v": V.ravel(),
            "G": np.asarray(cdf_rows, dtype=float).ravel(),
            "g": np.ones(T.size),
            "dG_dtheta": np.zeros(T.size),
        }
    )


@pytest.mark.parametrize(
    "cdf_rows",
    [
        [[0.0, 0.6, 1.0], [0.0, 0.8, 0.7]],  # decreasing in v
        [[0.0, 0.5, 1.0], [0.0, 0.0, 0.0]],  # no mass
        [[0.0, 0.5, 1.0], [0.0, 1.2, 1.2]],  # above one
    ],
    ids=["decreasing", "no_mass", "above_one"],
)
def test_tabulated_family_rejects_invalid_cdf(cdf_rows):
    """Test rows that are not distribution functions are refused."""
    with pytest.raises(PreconditionError):
        TabulatedFamily(_square_table(cdf_rows))


def test_tabulated_family_reads_support_from_cdf():
    """Test each row's support runs from the last G = 0 node to the first G = 1."""
    family = TabulatedFamily(_square_table([[0.0, 1.0, 1.0], [0.0, 0.0, 1.0]]))
    assert float(family.lower_support(1.0)) == pytest.approx(0.0)
    assert float(family.upper_support(1.0)) == pytest.approx(0.5)
    assert float(family.lower_support(2.0)) == pytest.approx(0.5)
    assert float(family.upper_support(2.0)) == pytest.approx(1.0)
    assert float(family.lower_support(1.5)) == pytest.approx(0.25)
    assert float(family.cdf(1.5, 0.5)) == pytest.approx(0.5)
    assert float(family.pdf(1.5, 0.5)) == pytest.approx(2.0)
