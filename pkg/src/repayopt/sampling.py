"""Random instance generators for verification suites and tests."""

from __future__ import annotations

import numpy as np

from .model import (
    ConstantRate,
    LoanTerms,
    MaxRate,
    MinRate,
    PaymentBounds,
    Segment,
    Strategy,
    TabulatedRate,
)
from .schedules import BorrowerProfile, bounds_from_profile


def random_terms(rng: np.random.Generator, horizon: float | None = None) -> LoanTerms:
    return LoanTerms(
        r=float(rng.uniform(0.005, 0.08)),
        beta=float(rng.uniform(0.01, 0.08)),
        omega=float(rng.uniform(0.1, 0.9)),
        horizon=float(horizon if horizon is not None else rng.uniform(8.0, 30.0)),
    )


def random_bounds(
    rng: np.random.Generator, horizon: float, tabulated: bool = False
) -> PaymentBounds:
    if tabulated:
        n = int(rng.integers(2, 6))
        times = sorted(rng.uniform(0.1 * horizon, horizon, size=n - 1).tolist())
        times.append(horizon)
        lows = rng.uniform(2.0, 8.0, size=n)
        highs = lows * rng.uniform(1.8, 4.0, size=n)
        return PaymentBounds.tabulated(times, lows.tolist(), highs.tolist())
    # One draw in four uses declining income, exercising the regime flips
    # a falling payment band causes.
    growth = float(rng.uniform(-0.04, 0.0) if rng.random() < 0.25 else rng.uniform(0.0, 0.06))
    profile = BorrowerProfile(
        annual_income=float(rng.uniform(50.0, 150.0)),
        subsistence=32.0,
        growth=growth,
        f_min=float(rng.uniform(0.05, 0.15)),
        f_max=float(rng.uniform(0.2, 0.45)),
    )
    return bounds_from_profile(profile, horizon)


def random_strategy(
    rng: np.random.Generator, bounds: PaymentBounds, max_segments: int = 6
) -> Strategy:
    """Random admissible piecewise policy (min / max / constant / tabulated)."""
    horizon = bounds.horizon
    n = int(rng.integers(1, max_segments + 1))
    cuts = sorted(rng.uniform(0.0, horizon, size=n - 1).tolist())
    edges = [c for c in cuts if c > 1e-6] + [horizon]
    segments: list[Segment] = []
    prev = 0.0
    for end in edges:
        if end <= prev + 1e-6:
            continue
        segments.append(Segment(end, _random_policy(rng, bounds, prev, end)))
        prev = end
    if not segments:
        segments = [Segment(horizon, MinRate())]
    return Strategy(tuple(segments))


def _random_policy(rng, bounds: PaymentBounds, lo: float, hi: float):
    kind = rng.integers(0, 4)
    if kind == 0:
        return MinRate()
    if kind == 1:
        return MaxRate()
    band_lo, band_hi = _band(bounds, lo, hi)
    if kind == 2 and band_lo < band_hi:
        u = rng.uniform(0.05, 0.95)
        return ConstantRate(level=float(band_lo + u * (band_hi - band_lo)))
    # Tabulated: constant steps inside the admissible band.  Long spans under
    # growing bounds may admit no constant at all (the minimum outgrows the
    # early maximum), so spans are halved until each has a nonempty band.
    k = int(rng.integers(1, 4))
    edges = sorted(rng.uniform(lo, hi, size=k - 1).tolist()) + [hi]
    spans: list[tuple[float, float]] = []
    prev = lo
    for t in edges:
        if t <= prev + 1e-6:
            continue
        pending = [(prev, t)]
        while pending:
            a, b = pending.pop()
            b_lo, b_hi = _band(bounds, a, b)
            if b_lo < b_hi or b - a < 1e-3:
                spans.append((a, b))
            else:
                mid = 0.5 * (a + b)
                pending.append((mid, b))
                pending.append((a, mid))
        prev = t
    spans.sort()
    times, levels = [], []
    for a, b in spans:
        b_lo, b_hi = _band(bounds, a, b)
        if b_lo >= b_hi:
            return MinRate()  # pathological band even after splitting
        times.append(b)
        levels.append(float(b_lo + rng.uniform(0.05, 0.95) * (b_hi - b_lo)))
    if not times:
        return MinRate()
    return TabulatedRate(times=tuple(times), levels=tuple(levels))


def _band(bounds: PaymentBounds, lo: float, hi: float) -> tuple[float, float]:
    """Levels admissible as constants on [lo, hi]: [sup min, inf max]."""
    sup_min, inf_max = 0.0, float("inf")
    for p in bounds.minimum.pieces_between(lo, hi):
        sup_min = max(sup_min, p.rate.value(p.start), p.rate.value(p.end))
    for p in bounds.maximum.pieces_between(lo, hi):
        inf_max = min(inf_max, p.rate.value(p.start), p.rate.value(p.end))
    return sup_min, inf_max
