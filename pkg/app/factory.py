"""
Solver Factory - turns a validated RunConfig into model, mechanism and
verification settings.
"""

from typing import Optional

from mechanism import DirectMechanism, build_mechanism
from model import (
    BoundedDistribution,
    DiagnosticReport,
    MultiplicativeFamily,
    ScreeningModel,
    SignalDistribution,
    example1_model,
    load_tabulated_family,
)
from numerics import AssumptionViolationError, Grid, QuadratureRule
from observability.logger import log_info
from verify import VerificationSettings
from virtual import regularity_check

from .run_config import DistributionConfig, RunConfig


def build_distribution(cfg: DistributionConfig) -> BoundedDistribution:
    if cfg.kind == "uniform":
        return BoundedDistribution.uniform(cfg.lo, cfg.hi)
    if cfg.kind == "beta":
        return BoundedDistribution.beta(cfg.a, cfg.b, cfg.lo, cfg.hi)
    if cfg.kind == "truncnorm":
        return BoundedDistribution.truncnorm(cfg.mean, cfg.std, cfg.lo, cfg.hi)
    return BoundedDistribution.uniform_mixture(cfg.components)


def build_model(config: RunConfig) -> ScreeningModel:
    env = config.environment
    if config.model.family == "example1":
        return example1_model(env.alpha, env.cost, env.gamma, env.spot_price)

    environment = env.to_environment()
    signal_dist = build_distribution(config.model.signal)
    signal = SignalDistribution.from_distribution(signal_dist)
    if config.model.family == "tabulated":
        family = load_tabulated_family(config.model.table)
    else:
        shock = build_distribution(config.model.shock)
        family = MultiplicativeFamily(shock, signal.theta_lo, signal.theta_hi)
    return ScreeningModel(environment, signal, family)


def build_rule(config: RunConfig) -> QuadratureRule:
    quad = config.quadrature
    return QuadratureRule(order=quad.order, panels=quad.panels)


def theta_grid(config: RunConfig, mech: DirectMechanism) -> Grid:
    signal = mech.signal
    return Grid.linspace(signal.theta_lo, signal.theta_hi, config.grids.theta_points)


def value_grid(config: RunConfig, mech: DirectMechanism) -> Grid:
    family = mech.family
    return Grid.linspace(family.global_lo, family.global_hi, config.grids.v_points)


def build_solver(config: RunConfig) -> DirectMechanism:
    model = build_model(config)
    grid = None
    if config.quadrature.mode == "tabulated":
        grid = Grid.linspace(
            model.signal.theta_lo, model.signal.theta_hi, config.grids.theta_points
        )
    mech = build_mechanism(model, build_rule(config), config.quadrature.mode, grid)
    log_info(
        f"🏗️ [Factory] mechanism ready | {model.family.name}",
        mode=config.quadrature.mode,
        alpha=model.environment.alpha,
        cost=model.environment.cost,
    )
    return mech


def require_regular(config: RunConfig, mech: DirectMechanism) -> DiagnosticReport:
    """Regularity diagnostic on the run grids; refuse to solve when it fails."""
    report = regularity_check(
        mech.field,
        theta_grid(config, mech),
        value_grid(config, mech),
        config.tolerances.monotone,
    )
    if not report.passed:
        raise AssumptionViolationError(
            "refused: regularity violated (virtual value not monotone where positive)",
            report=report,
        )
    return report


def verification_settings(
    config: RunConfig,
    gamma: Optional[float] = None,
    spot_price: Optional[float] = None,
) -> VerificationSettings:
    grids, tols = config.grids, config.tolerances
    env = config.environment
    return VerificationSettings(
        theta_points=grids.theta_points,
        v_points=grids.v_points,
        oracle_points=grids.oracle_points,
        q_oracle_points=grids.q_oracle_points,
        ic1_types=grids.ic1_types,
        envelope_points=grids.envelope_points,
        refine=grids.refine,
        workers=config.workers,
        ic_tol=tols.ic,
        monotone_tol=tols.monotone,
        revenue_tol=tols.integration,
        envelope_tol=tols.envelope,
        oracle_tol=tols.oracle,
        profit_tol=tols.profit,
        root_tol=tols.root,
        gamma=env.gamma if gamma is None else gamma,
        spot_price=env.spot_price if spot_price is None else spot_price,
    )
