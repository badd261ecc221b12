"""Shared fixtures and independent oracles for the test suite."""

from __future__ import annotations

import math

import numpy as np
import pytest

from repayopt import LoanTerms, PaymentBounds
from repayopt.dynamics import realize


@pytest.fixture
def paper_terms() -> LoanTerms:
    return LoanTerms(r=0.03, beta=0.04, omega=0.4, horizon=25.0)


@pytest.fixture
def const_bounds() -> PaymentBounds:
    # Constant 5 / 15 (thousands per year) over 25 years.
    return PaymentBounds.exponential(5.0, 15.0, 0.0, 25.0)


@pytest.fixture
def fig_bounds() -> PaymentBounds:
    # 10% / 30% of 50k discretionary income growing at 4%.
    return PaymentBounds.exponential(5.0, 15.0, 0.04, 25.0)


def rk4_balance(terms, x, strategy, bounds, t_end, steps_per_year: int = 120) -> float:
    """Fixed-step Runge-Kutta integration of the compound balance dynamics.

    Integrates piece by piece so the payment-rate discontinuities never land
    inside a step; independent of the closed-form path it checks.
    """
    lam = terms.loan_rate
    rate_fn = realize(strategy, bounds)
    b = x
    for piece in rate_fn.pieces_between(0.0, t_end):
        span = piece.end - piece.start
        n = max(8, int(math.ceil(span * steps_per_year)))
        h = span / n
        t = piece.start
        value = piece.rate.value
        for _ in range(n):
            k1 = lam * b - value(t)
            k2 = lam * (b + 0.5 * h * k1) - value(t + 0.5 * h)
            k3 = lam * (b + 0.5 * h * k2) - value(t + 0.5 * h)
            k4 = lam * (b + h * k3) - value(t + h)
            b += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            t += h
    return b


def euler_simple(terms, x, strategy, bounds, t_end, steps_per_year: int = 20000):
    """Fixed-step midpoint integration of the simple-interest dynamics.

    Tracks the balance and its running minimum directly from the defining
    equations; an independent cross-check for the event-driven integrator.
    """
    lam = terms.loan_rate
    rate_fn = realize(strategy, bounds)
    n = int(math.ceil(t_end * steps_per_year))
    h = t_end / n
    b, p = x, x
    t = 0.0
    for _ in range(n):
        alpha = rate_fn.value(t + 0.5 * h)
        b = b + (lam * p - alpha) * h
        if b <= 0.0:
            return 0.0, 0.0, t + h
        p = min(p, b)
        t += h
    return b, p, None
