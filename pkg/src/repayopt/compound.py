"""Closed-form optimal repayment under compound interest.

The optimal plan is bang-bang: either maximum payments until payoff, or
maximum payments up to the critical horizon followed by minimum payments
until forgiveness.  The critical balance separating the two regimes is the
unique balance at which both plans cost the same.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .dynamics import _invert_discounted, cost
from .model import (
    DomainError,
    LoanTerms,
    Mode,
    PaymentBounds,
    Strategy,
    ValuationResult,
)
from .numerics import bracket_root


def critical_horizon(terms: LoanTerms) -> float:
    """Time after which extra payments stop saving money: (T + ln(omega)/beta)+.

    Repaying one more dollar at time t spares taxes on its forgiven value
    omega * e^{beta (T - t)}; past the critical horizon that saving is below
    one dollar, so payments should drop to the minimum.
    """
    return max(0.0, terms.horizon + math.log(terms.omega) / terms.beta)


def _tax_weighted(terms: LoanTerms, rate_fn, lo: float, hi: float) -> float:
    """int_lo^hi e^{-r s} f(s) (1 - omega e^{beta (T - s)}) ds."""
    scale = terms.omega * math.exp(terms.beta * terms.horizon)
    return rate_fn.integral(lo, hi, terms.r) - scale * rate_fn.integral(
        lo, hi, terms.loan_rate
    )


def critical_payoff_time(terms: LoanTerms, bounds: PaymentBounds) -> float:
    """The payoff time of the critical balance under maximum payments.

    Unique root in (t_c, T) of the indifference equation balancing the
    net-of-tax cost of maximum payments against minimum payments; the left
    side is strictly increasing there, so the root is bracketed.
    """
    t_c = critical_horizon(terms)
    horizon = bounds.horizon
    rhs = _tax_weighted(terms, bounds.minimum, t_c, horizon)

    def gap(t_star: float) -> float:
        return _tax_weighted(terms, bounds.maximum, t_c, t_star) - rhs

    return bracket_root(gap, t_c, horizon, xtol=1e-12)


def critical_balance(terms: LoanTerms, bounds: PaymentBounds) -> float:
    """Balance above which enrolling in income-driven repayment is optimal."""
    t_star = critical_payoff_time(terms, bounds)
    return bounds.maximum.integral(0.0, t_star, terms.loan_rate)


def value_max_min(terms: LoanTerms, bounds: PaymentBounds, x: float) -> float:
    """Cost of max-to-critical-horizon-then-min; affine in x with slope omega e^{beta T}."""
    if x <= 0.0:
        raise ValueError("balance must be positive")
    t_c = critical_horizon(terms)
    horizon = bounds.horizon
    r, lam = terms.r, terms.loan_rate
    paid = bounds.maximum.integral(0.0, t_c, r) + bounds.minimum.integral(t_c, horizon, r)
    mass = bounds.maximum.integral(0.0, t_c, lam) + bounds.minimum.integral(
        t_c, horizon, lam
    )
    return paid + terms.omega * math.exp(terms.beta * horizon) * (x - mass)


def value_max_only(
    terms: LoanTerms, bounds: PaymentBounds, x: float
) -> tuple[float, float]:
    """Cost of paying the maximum until payoff; returns (cost, payoff time)."""
    if x <= 0.0:
        raise ValueError("balance must be positive")
    lam = terms.loan_rate
    x_upper = bounds.maximum.integral(0.0, bounds.horizon, lam)
    if x > x_upper * (1.0 + 1e-12):
        raise DomainError(
            f"balance {x} exceeds what maximum payments can pay off ({x_upper})"
        )
    t_m = _invert_discounted(bounds.maximum, lam, x)
    if t_m is None:  # numerical edge exactly at the cap
        t_m = bounds.horizon
    return bounds.maximum.integral(0.0, t_m, terms.r), t_m


@dataclass(frozen=True)
class Thresholds:
    """Balance and time thresholds of the compound-interest solution.

    x_lower/x_upper -- discounted mass of min/max payments over the horizon:
      balances below x_lower are repaid even at the minimum, balances above
      x_upper survive to forgiveness even at the maximum.
    x_hat  -- discounted max payments up to the critical horizon.
    x_c    -- discounted payments of the max-min plan (its payoff capacity).
    x_star -- the critical balance; t_star its max-payment payoff time.
    """

    x_lower: float
    x_upper: float
    x_c: float
    x_hat: float
    t_c: float
    t_star: float
    x_star: float


def thresholds(terms: LoanTerms, bounds: PaymentBounds) -> Thresholds:
    lam = terms.loan_rate
    horizon = bounds.horizon
    t_c = critical_horizon(terms)
    x_hat = bounds.maximum.integral(0.0, t_c, lam)
    t_star = critical_payoff_time(terms, bounds)
    return Thresholds(
        x_lower=bounds.minimum.integral(0.0, horizon, lam),
        x_upper=bounds.maximum.integral(0.0, horizon, lam),
        x_c=x_hat + bounds.minimum.integral(t_c, horizon, lam),
        x_hat=x_hat,
        t_c=t_c,
        t_star=t_star,
        x_star=bounds.maximum.integral(0.0, t_star, lam),
    )


def optimal_strategy_compound(
    terms: LoanTerms, bounds: PaymentBounds, x: float
) -> tuple[Strategy, ValuationResult]:
    """The cost-minimizing plan: max-then-min above the critical balance,
    max-only at or below it (ties go to max-only)."""
    if x <= 0.0:
        raise ValueError("balance must be positive")
    horizon = bounds.horizon
    if x > critical_balance(terms, bounds):
        strategy = Strategy.max_min(critical_horizon(terms), horizon)
    else:
        strategy = Strategy.max_only(horizon)
    return strategy, cost(terms, x, strategy, bounds, Mode.COMPOUND)


def forgiven_switch_cost(
    terms: LoanTerms, bounds: PaymentBounds, x: float, t0: float
) -> float:
    """Cost of max-until-t0-then-min when the balance survives to forgiveness."""
    horizon = bounds.horizon
    if not (0.0 <= t0 <= horizon):
        raise ValueError(f"switch time {t0} outside [0, {horizon}]")
    r, lam = terms.r, terms.loan_rate
    mass = bounds.maximum.integral(0.0, t0, lam) + bounds.minimum.integral(
        t0, horizon, lam
    )
    if x <= mass * (1.0 + 1e-12):
        raise DomainError(
            f"balance {x} is paid off before the horizon when switching at {t0}"
        )
    paid = bounds.maximum.integral(0.0, t0, r) + bounds.minimum.integral(t0, horizon, r)
    return paid + terms.omega * math.exp(terms.beta * horizon) * (x - mass)


def payoff_switch_cost(
    terms: LoanTerms, bounds: PaymentBounds, x: float, t0: float
) -> float:
    """Cost of max-until-t0-then-min when the plan pays the loan off."""
    lam = terms.loan_rate
    _, t_m = value_max_only(terms, bounds, x)  # validates x against x_upper
    if t0 > t_m * (1.0 + 1e-12):
        raise DomainError(f"switch time {t0} exceeds the max-payment payoff time {t_m}")
    t0 = min(t0, t_m)
    head = bounds.maximum.integral(0.0, t0, lam)
    need = x - head
    remaining = bounds.minimum.integral(t0, bounds.horizon, lam)
    if need > remaining * (1.0 + 1e-12):
        raise DomainError(
            f"switching to minimum payments at {t0} cannot pay off {x} by the horizon"
        )
    tau = _invert_discounted(bounds.minimum, lam, need, start=t0)
    if tau is None:
        tau = bounds.horizon
    return bounds.maximum.integral(0.0, t0, terms.r) + bounds.minimum.integral(
        t0, tau, terms.r
    )
