"""Core domain types: loan terms, payment bounds, strategies, trajectories.

Currency is in thousands of dollars, time in years, rates in per-year
decimals throughout.  Every type is immutable after construction and
validated at construction, so values can be shared freely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Union

from .numerics import expm1_over


class LoanModelError(Exception):
    """Base class for model-level failures."""


class AdmissibilityError(LoanModelError):
    """A strategy's payment rate leaves the [min, max] band somewhere."""


class DomainError(LoanModelError):
    """An operation was asked outside its mathematical domain."""


class ResourceLimitError(LoanModelError):
    """A requested computation exceeds the configured resource caps."""


@dataclass(frozen=True)
class LoanTerms:
    """Loan and borrower rate parameters.

    r       -- borrower discount rate (per year, > 0)
    beta    -- loan-rate spread over r (per year, > 0); the loan accrues at r + beta
    omega   -- tax rate applied to the balance forgiven at the horizon, in (0, 1)
    horizon -- forgiveness horizon in years (> 0)
    """

    r: float
    beta: float
    omega: float
    horizon: float

    def __post_init__(self) -> None:
        if not (self.r > 0.0):
            raise ValueError(f"discount rate must be positive, got {self.r}")
        if not (self.beta > 0.0):
            raise ValueError(f"rate spread must be positive, got {self.beta}")
        if not (0.0 < self.omega < 1.0):
            raise ValueError(f"tax rate must lie in (0, 1), got {self.omega}")
        if not (self.horizon > 0.0):
            raise ValueError(f"horizon must be positive, got {self.horizon}")

    @property
    def loan_rate(self) -> float:
        return self.r + self.beta


@dataclass(frozen=True)
class ExpRate:
    """Exponential payment-rate piece: value(t) = coef * exp(growth * t)."""

    coef: float
    growth: float = 0.0

    def value(self, t: float) -> float:
        return self.coef * math.exp(self.growth * t)

    def integral(self, lo: float, hi: float, rho: float = 0.0) -> float:
        """Integral of exp(-rho * s) * value(s) over [lo, hi], closed form."""
        if hi <= lo:
            return 0.0
        k = self.growth - rho
        return self.coef * math.exp(k * lo) * expm1_over(k, hi - lo)


@dataclass(frozen=True)
class RatePiece:
    start: float
    end: float
    rate: ExpRate


class RateFunction:
    """Piecewise-exponential rate over [0, horizon], with exact integrals.

    Pieces are contiguous and cover the whole interval.  Point evaluation is
    left-continuous: value(t) uses the piece whose interval ends at t.
    """

    __slots__ = ("pieces",)

    def __init__(self, pieces: Sequence[RatePiece]):
        if not pieces:
            raise ValueError("a rate function needs at least one piece")
        prev = 0.0
        for p in pieces:
            if p.start < prev - 1e-12 or p.start > prev + 1e-12:
                raise ValueError("rate pieces must be contiguous from 0")
            if p.end <= p.start:
                raise ValueError("rate pieces must have positive length")
            prev = p.end
        self.pieces: tuple[RatePiece, ...] = tuple(pieces)

    @property
    def end(self) -> float:
        return self.pieces[-1].end

    def value(self, t: float) -> float:
        if t <= self.pieces[0].end:
            return self.pieces[0].rate.value(t)
        for p in self.pieces:
            if p.start < t <= p.end:
                return p.rate.value(t)
        return self.pieces[-1].rate.value(t)

    def integral(self, lo: float, hi: float, rho: float = 0.0) -> float:
        """Integral of exp(-rho*s) * rate(s) over [lo, hi] (lo <= hi)."""
        if hi <= lo:
            return 0.0
        total = 0.0
        for p in self.pieces:
            a = max(lo, p.start)
            b = min(hi, p.end)
            if b > a:
                total += p.rate.integral(a, b, rho)
        return total

    def pieces_between(self, lo: float, hi: float) -> list[RatePiece]:
        """Pieces clipped to [lo, hi], preserving order."""
        out = []
        for p in self.pieces:
            a = max(lo, p.start)
            b = min(hi, p.end)
            if b > a + 1e-15:
                out.append(RatePiece(a, b, p.rate))
        return out

    def is_nondecreasing(self) -> bool:
        prev_end_value = None
        for p in self.pieces:
            if p.rate.coef > 0 and p.rate.growth < 0:
                return False
            if p.rate.coef < 0:
                return False
            start_value = p.rate.value(p.start)
            if prev_end_value is not None and start_value < prev_end_value * (1 - 1e-12):
                return False
            prev_end_value = p.rate.value(p.end)
        return True


@dataclass(frozen=True)
class PaymentBounds:
    """Time-varying admissible payment band: 0 < minimum(t) < maximum(t)."""

    minimum: RateFunction
    maximum: RateFunction

    def __post_init__(self) -> None:
        if abs(self.minimum.end - self.maximum.end) > 1e-9:
            raise ValueError("min and max rates must cover the same interval")
        # Positivity and strict ordering, checked on piece endpoints plus a
        # dense grid (pieces are monotone so this is effectively exhaustive).
        horizon = self.minimum.end
        checkpoints = {0.0, horizon}
        for rf in (self.minimum, self.maximum):
            for p in rf.pieces:
                checkpoints.add(p.start)
                checkpoints.add(p.end)
        n = 257
        for i in range(n + 1):
            checkpoints.add(horizon * i / n)
        for t in sorted(checkpoints):
            m = self.minimum.value(t)
            big = self.maximum.value(t)
            if m <= 0.0:
                raise ValueError(f"minimum payment rate must be positive (t={t:.4g})")
            if m >= big:
                raise ValueError(
                    f"minimum rate must stay below maximum rate (t={t:.4g}: {m} >= {big})"
                )

    @property
    def horizon(self) -> float:
        return self.minimum.end

    @staticmethod
    def exponential(
        base_min: float, base_max: float, growth: float, horizon: float
    ) -> "PaymentBounds":
        """Both bounds grow exponentially at a common rate from base levels."""
        return PaymentBounds(
            minimum=RateFunction([RatePiece(0.0, horizon, ExpRate(base_min, growth))]),
            maximum=RateFunction([RatePiece(0.0, horizon, ExpRate(base_max, growth))]),
        )

    @staticmethod
    def tabulated(
        times: Sequence[float], min_levels: Sequence[float], max_levels: Sequence[float]
    ) -> "PaymentBounds":
        """Piecewise-constant bounds; ``times`` are the interval right edges.

        Level i applies on (times[i-1], times[i]] (left-continuous), with the
        first interval starting at 0.
        """
        if not (len(times) == len(min_levels) == len(max_levels)):
            raise ValueError("times, min_levels and max_levels must have equal length")
        lo_pieces, hi_pieces = [], []
        prev = 0.0
        for t, lo, hi in zip(times, min_levels, max_levels):
            lo_pieces.append(RatePiece(prev, t, ExpRate(lo)))
            hi_pieces.append(RatePiece(prev, t, ExpRate(hi)))
            prev = t
        return PaymentBounds(RateFunction(lo_pieces), RateFunction(hi_pieces))


# ---------------------------------------------------------------------------
# Strategies
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MinRate:
    """Pay the minimum allowed rate."""


@dataclass(frozen=True)
class MaxRate:
    """Pay the maximum allowed rate."""


@dataclass(frozen=True)
class ConstantRate:
    """Pay a constant rate; must lie inside the admissible band."""

    level: float


@dataclass(frozen=True)
class TabulatedRate:
    """Piecewise-constant rate on a grid of interval right edges."""

    times: tuple[float, ...]
    levels: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.times) != len(self.levels) or not self.times:
            raise ValueError("times and levels must be equally sized and nonempty")


Policy = Union[MinRate, MaxRate, ConstantRate, TabulatedRate]


@dataclass(frozen=True)
class Segment:
    """One strategy segment, active up to (and including) ``end``."""

    end: float
    policy: Policy


@dataclass(frozen=True)
class Strategy:
    """Piecewise repayment policy covering [0, horizon]."""

    segments: tuple[Segment, ...]

    def __post_init__(self) -> None:
        if not self.segments:
            raise ValueError("a strategy needs at least one segment")
        prev = 0.0
        for seg in self.segments:
            if seg.end <= prev:
                raise ValueError("segment end times must be strictly increasing")
            prev = seg.end

    @property
    def horizon(self) -> float:
        return self.segments[-1].end

    @staticmethod
    def max_only(horizon: float) -> "Strategy":
        return Strategy((Segment(horizon, MaxRate()),))

    @staticmethod
    def min_only(horizon: float) -> "Strategy":
        return Strategy((Segment(horizon, MinRate()),))

    @staticmethod
    def max_min(switch: float, horizon: float) -> "Strategy":
        """Maximum payments on [0, switch], minimum afterwards.

        Degenerate switch times collapse to the single-policy strategies so
        no zero-length segments are ever produced.
        """
        if switch <= 0.0:
            return Strategy.min_only(horizon)
        if switch >= horizon:
            return Strategy.max_only(horizon)
        return Strategy((Segment(switch, MaxRate()), Segment(horizon, MinRate())))

    @staticmethod
    def min_max_tail(t0: float, t1: float, horizon: float) -> "Strategy":
        """Minimum on [0, t0], maximum on (t0, t1], minimum on (t1, horizon]."""
        t0 = min(max(t0, 0.0), horizon)
        t1 = min(max(t1, t0), horizon)
        segs: list[Segment] = []
        if t0 > 0.0:
            segs.append(Segment(t0, MinRate()))
        if t1 > t0:
            segs.append(Segment(t1, MaxRate()))
        if horizon > t1:
            segs.append(Segment(horizon, MinRate()))
        if not segs:
            return Strategy.min_only(horizon)
        return Strategy(tuple(segs))

    def label(self) -> str:
        kinds = []
        for seg in self.segments:
            if isinstance(seg.policy, MinRate):
                kinds.append("min")
            elif isinstance(seg.policy, MaxRate):
                kinds.append("max")
            else:
                kinds.append("custom")
        if kinds == ["max"]:
            return "max"
        if kinds == ["min"]:
            return "min-only"
        if kinds == ["max", "min"]:
            return "max-min"
        if kinds == ["min", "max"]:
            return "min-max"
        if kinds == ["min", "max", "min"]:
            return "min-max-min"
        return "custom"


class Mode(Enum):
    """Interest-accrual convention for the balance dynamics."""

    COMPOUND = "compound"
    SIMPLE = "simple"


class StopKind(Enum):
    PAID_OFF = "paid_off"
    FORGIVEN = "forgiven"


@dataclass(frozen=True)
class TrajectorySample:
    t: float
    balance: float
    principal: float
    rate: float
    discounted_paid: float


@dataclass(frozen=True)
class Trajectory:
    """Sampled loan path up to the stopping time.

    ``theta`` is the first time the principal drops below its initial value
    (the horizon if it never does).  Balances are clipped at zero only at the
    stopping time.
    """

    samples: tuple[TrajectorySample, ...]
    stop_time: float
    stop_kind: StopKind
    theta: float
    final_balance: float


@dataclass(frozen=True)
class ValuationResult:
    """Present value of a repayment plan together with its terminal facts."""

    cost: float
    strategy: Strategy
    tau: float
    forgiven_balance: float
    tax_payment: float
    heuristic: bool = False

    def __post_init__(self) -> None:
        if self.cost < 0.0:
            raise ValueError("cost cannot be negative")
        if self.forgiven_balance < -1e-9:
            raise ValueError("forgiven balance cannot be negative")
