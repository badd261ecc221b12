"""Repayment-cost optimizer for income-driven federal student loans."""

__version__ = "0.1.0"

from .compound import (
    Thresholds,
    critical_balance,
    critical_horizon,
    critical_payoff_time,
    forgiven_switch_cost,
    optimal_strategy_compound,
    payoff_switch_cost,
    thresholds,
    value_max_min,
    value_max_only,
)
from .dynamics import (
    balance_compound,
    cost,
    payoff_time,
    realize,
    simulate_simple,
    trajectory_compound,
)
from .model import (
    AdmissibilityError,
    ConstantRate,
    DomainError,
    LoanModelError,
    LoanTerms,
    MaxRate,
    MinRate,
    Mode,
    PaymentBounds,
    ResourceLimitError,
    Segment,
    StopKind,
    Strategy,
    TabulatedRate,
    Trajectory,
    TrajectorySample,
    ValuationResult,
)
from .schedules import BorrowerProfile, bounds_from_profile
from .sweeps import SweepAxis, SweepSpec, contour_grid, frontier_rows
from .simple import (
    DpResult,
    Improvement,
    PrincipalClock,
    Regime,
    RegimeClass,
    classify_regime,
    dp_oracle,
    improve_interest_phase,
    improve_principal_phase,
    marginal_cost,
    optimize_simple,
    principal_clock,
)

__all__ = [
    "__version__",
    "AdmissibilityError",
    "BorrowerProfile",
    "ConstantRate",
    "DomainError",
    "DpResult",
    "Improvement",
    "LoanModelError",
    "LoanTerms",
    "MaxRate",
    "MinRate",
    "Mode",
    "PaymentBounds",
    "PrincipalClock",
    "Regime",
    "RegimeClass",
    "ResourceLimitError",
    "Segment",
    "StopKind",
    "Strategy",
    "SweepAxis",
    "SweepSpec",
    "TabulatedRate",
    "Thresholds",
    "Trajectory",
    "TrajectorySample",
    "ValuationResult",
    "balance_compound",
    "bounds_from_profile",
    "classify_regime",
    "contour_grid",
    "cost",
    "critical_balance",
    "critical_horizon",
    "critical_payoff_time",
    "dp_oracle",
    "forgiven_switch_cost",
    "frontier_rows",
    "improve_interest_phase",
    "improve_principal_phase",
    "marginal_cost",
    "optimal_strategy_compound",
    "optimize_simple",
    "payoff_switch_cost",
    "payoff_time",
    "principal_clock",
    "realize",
    "simulate_simple",
    "thresholds",
    "trajectory_compound",
    "value_max_min",
    "value_max_only",
]
