"""Balance dynamics, stopping times and repayment cost.

Two accrual conventions share one payment machinery:

* compound -- the whole balance accrues at the loan rate, so the balance has
  the closed form ``b(t) = e^{(r+beta)t} (x - int_0^t e^{-(r+beta)s} a_s ds)``.
* simple -- only the principal (the running minimum of the balance) accrues
  interest; accrued interest is repaid first and earns nothing.

All payment policies reduce to piecewise-exponential rate functions, so both
conventions are integrated exactly piece by piece; events (the balance
re-touching the principal, payments crossing the interest flow, payoff) are
located by bracketed bisection on the closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import (
    AdmissibilityError,
    ConstantRate,
    ExpRate,
    LoanTerms,
    MaxRate,
    MinRate,
    Mode,
    PaymentBounds,
    RateFunction,
    RatePiece,
    StopKind,
    Strategy,
    TabulatedRate,
    Trajectory,
    TrajectorySample,
    ValuationResult,
)
from .numerics import bracket_root, expm1_over

_TIME_TOL = 1e-12  # years
_BAL_TOL = 1e-10  # currency (thousands)


# ---------------------------------------------------------------------------
# Strategy realization
# ---------------------------------------------------------------------------

def _check_band(level: float, bounds: PaymentBounds, lo: float, hi: float) -> None:
    """Verify a constant level stays inside [min, max] on [lo, hi]."""
    tol = 1e-9 * max(1.0, abs(level))
    for src, is_min in ((bounds.minimum, True), (bounds.maximum, False)):
        for p in src.pieces_between(lo, hi):
            va, vb = p.rate.value(p.start), p.rate.value(p.end)
            if is_min and level < max(va, vb) - tol:
                raise AdmissibilityError(
                    f"constant rate {level} falls below the minimum payment "
                    f"on [{p.start:.6g}, {p.end:.6g}]"
                )
            if not is_min and level > min(va, vb) + tol:
                raise AdmissibilityError(
                    f"constant rate {level} exceeds the maximum payment "
                    f"on [{p.start:.6g}, {p.end:.6g}]"
                )


def realize(strategy: Strategy, bounds: PaymentBounds) -> RateFunction:
    """Resolve a strategy against payment bounds into a concrete rate function.

    Constant and tabulated levels are checked against the admissible band and
    rejected (never clamped) when they leave it.
    """
    if abs(strategy.horizon - bounds.horizon) > 1e-9:
        raise AdmissibilityError(
            f"strategy horizon {strategy.horizon} != bounds horizon {bounds.horizon}"
        )
    pieces: list[RatePiece] = []
    prev = 0.0
    for seg in strategy.segments:
        lo, hi = prev, seg.end
        pol = seg.policy
        if isinstance(pol, MinRate):
            pieces.extend(bounds.minimum.pieces_between(lo, hi))
        elif isinstance(pol, MaxRate):
            pieces.extend(bounds.maximum.pieces_between(lo, hi))
        elif isinstance(pol, ConstantRate):
            _check_band(pol.level, bounds, lo, hi)
            pieces.append(RatePiece(lo, hi, ExpRate(pol.level)))
        elif isinstance(pol, TabulatedRate):
            if pol.times[-1] < hi - 1e-9:
                raise AdmissibilityError("tabulated policy does not cover its segment")
            start = lo
            for t_end, level in zip(pol.times, pol.levels):
                a, b = max(lo, start), min(hi, t_end)
                if b > a + _TIME_TOL:
                    _check_band(level, bounds, a, b)
                    pieces.append(RatePiece(a, b, ExpRate(level)))
                start = t_end
                if start >= hi:
                    break
        else:  # pragma: no cover - exhaustive over Policy
            raise TypeError(f"unknown policy {pol!r}")
        prev = seg.end
    # Snap contiguity against float drift from clipping.
    snapped = []
    cursor = 0.0
    for p in pieces:
        snapped.append(RatePiece(cursor, max(p.end, cursor + _TIME_TOL), p.rate))
        cursor = snapped[-1].end
    return RateFunction(snapped)


def _value_right(rate_fn: RateFunction, t: float) -> float:
    """Rate at t from the right (the convention for regime decisions)."""
    for p in rate_fn.pieces:
        if p.start - _TIME_TOL <= t < p.end:
            return p.rate.value(t)
    return rate_fn.pieces[-1].rate.value(t)


# ---------------------------------------------------------------------------
# Compound interest
# ---------------------------------------------------------------------------

def balance_compound(
    terms: LoanTerms, x: float, strategy: Strategy, bounds: PaymentBounds, t: float
) -> float:
    """Compound-interest balance at time t; may be negative past payoff."""
    if x <= 0.0:
        raise ValueError("initial balance must be positive")
    if not (0.0 <= t <= bounds.horizon + 1e-9):
        raise ValueError(f"t={t} outside [0, {bounds.horizon}]")
    rate_fn = realize(strategy, bounds)
    lam = terms.loan_rate
    return math.exp(lam * t) * (x - rate_fn.integral(0.0, t, lam))


def _invert_discounted(
    rate_fn: RateFunction, rho: float, target: float, start: float = 0.0
) -> float | None:
    """Smallest t with ``int_start^t e^{-rho s} rate(s) ds = target``, or None."""
    acc = 0.0
    for p in rate_fn.pieces:
        lo = max(p.start, start)
        if lo >= p.end:
            continue
        step = p.rate.integral(lo, p.end, rho)
        if acc + step >= target - 1e-15:
            # Invert within this piece: c e^{(g-rho)lo} (e^{k d} - 1)/k = target - acc.
            need = target - acc
            c_eff = p.rate.coef * math.exp((p.rate.growth - rho) * lo)
            k = p.rate.growth - rho
            if c_eff <= 0.0:
                return None
            z = k * need / c_eff
            if z <= -1.0:
                return None
            d = math.log1p(z) / k if abs(k) > 1e-14 else (need / c_eff) * (1.0 - 0.5 * z)
            return min(max(lo + d, lo), p.end)
        acc += step
    return None


def _payoff_time_compound(
    terms: LoanTerms, x: float, rate_fn: RateFunction
) -> tuple[float, StopKind]:
    lam = terms.loan_rate
    horizon = rate_fn.end
    total = rate_fn.integral(0.0, horizon, lam)
    if total < x - _BAL_TOL:
        return horizon, StopKind.FORGIVEN
    t = _invert_discounted(rate_fn, lam, x)
    if t is None:
        return horizon, StopKind.FORGIVEN
    return min(t, horizon), StopKind.PAID_OFF


# ---------------------------------------------------------------------------
# Simple interest integrator
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Leg:
    t0: float
    t1: float
    pinned: bool  # principal pinned (False: balance == principal, both falling)
    b0: float
    p0: float


@dataclass(frozen=True)
class _SimpleRun:
    legs: tuple[_Leg, ...]
    tau: float
    stop_kind: StopKind
    theta: float
    final_balance: float


def _pinned_until(
    lam: float, er: ExpRate, t0: float, seg_end: float, b0: float, p0: float
) -> tuple[str, float]:
    """Advance the pinned regime; return ('touch'|'end', time).

    The gap phi(t) = b(t) - p0 has monotone derivative per piece (the rate is
    exponential), so splitting at the derivative's zero gives intervals on
    which phi is monotone and a first crossing can be bracketed safely.
    """

    def phi(t: float) -> float:
        return b0 + lam * p0 * (t - t0) - er.integral(t0, t) - p0

    def dphi(t: float) -> float:
        return lam * p0 - er.value(t)

    knots = [t0, seg_end]
    if er.growth != 0.0 and er.coef > 0.0:
        ratio = lam * p0 / er.coef
        if ratio > 0.0:
            t_flat = math.log(ratio) / er.growth
            if t0 + _TIME_TOL < t_flat < seg_end - _TIME_TOL:
                knots = [t0, t_flat, seg_end]

    btol = _BAL_TOL * max(1.0, abs(p0))
    rtol = 1e-11 * max(1.0, lam * p0)
    phi_lo = b0 - p0
    lo = t0
    for hi in knots[1:]:
        if phi_lo <= btol:
            # Sitting on the principal; direction decides the regime.
            dm = dphi(0.5 * (lo + hi))
            d0 = dphi(lo)
            if d0 < -rtol or (abs(d0) <= rtol and dm < -rtol):
                return "touch", lo
            # Rising (or exactly interest-only): stays pinned through this span.
            phi_lo = phi(hi)
            lo = hi
            continue
        phi_hi = phi(hi)
        if phi_hi < -btol:
            s = bracket_root(phi, lo, hi, xtol=_TIME_TOL)
            return "touch", s
        if phi_hi <= btol and dphi(hi) < -rtol:
            return "touch", hi
        phi_lo = phi_hi
        lo = hi
    return "end", seg_end


def _compound_until(
    lam: float, er: ExpRate, t0: float, seg_end: float, b0: float
) -> tuple[str, float]:
    """Advance the falling balance==principal regime; ('payoff'|'flatten'|'end', time)."""
    c_eff = er.coef * math.exp(er.growth * t0)  # rate value at t0
    k = er.growth - lam

    def discounted(t: float) -> float:
        # int_{t0}^{t} e^{-lam (s - t0)} rate(s) ds
        return c_eff * expm1_over(k, t - t0)

    def bal(t: float) -> float:
        return math.exp(lam * (t - t0)) * (b0 - discounted(t))

    t_pay = None
    if c_eff > 0.0:
        z = k * b0 / c_eff
        if z > -1.0:
            d = math.log1p(z) / k if abs(k) > 1e-14 else (b0 / c_eff) * (1.0 - 0.5 * z)
            if d >= -_TIME_TOL:
                t_pay = t0 + max(d, 0.0)

    t_flat = None
    if er.growth < 0.0:
        # psi(t) = rate(t) - lam * b(t); e^{-lam t} psi is strictly decreasing
        # when the rate decays, so a single bracketed root suffices.
        def psi(t: float) -> float:
            return er.value(t) - lam * bal(t)

        end_probe = seg_end if t_pay is None else min(seg_end, t_pay)
        if psi(t0) > 0.0 and psi(end_probe) < 0.0:
            t_flat = bracket_root(psi, t0, end_probe, xtol=_TIME_TOL)

    candidates = [("end", seg_end)]
    if t_pay is not None and t_pay <= seg_end + _TIME_TOL:
        candidates.append(("payoff", min(t_pay, seg_end)))
    if t_flat is not None:
        candidates.append(("flatten", t_flat))
    kind, when = min(candidates, key=lambda kv: kv[1])
    return kind, when


def _simulate_core(terms: LoanTerms, rate_fn: RateFunction, x: float) -> _SimpleRun:
    lam = terms.loan_rate
    horizon = rate_fn.end
    t, b, p = 0.0, x, x
    theta: float | None = None
    legs: list[_Leg] = []
    tau, stop, final_b = horizon, StopKind.FORGIVEN, x

    compound = _value_right(rate_fn, 0.0) > lam * x + 1e-11 * max(1.0, lam * x)
    if compound:
        theta = 0.0

    idx = 0
    pieces = rate_fn.pieces
    guard = 0
    while t < horizon - _TIME_TOL:
        guard += 1
        if guard > 100 * (len(pieces) + 4):
            raise RuntimeError("simple-interest integrator failed to advance")
        while idx < len(pieces) and pieces[idx].end <= t + _TIME_TOL:
            idx += 1
        if idx >= len(pieces):
            break
        piece = pieces[idx]
        er, seg_end = piece.rate, piece.end

        if b > p + _BAL_TOL * max(1.0, p):
            compound = False
        elif not compound:
            # On the principal: flip to the falling regime if payments now
            # exceed the interest flow (piece boundaries can change this).
            b = p
            if _value_right(rate_fn, t) > lam * p + 1e-11 * max(1.0, lam * p):
                compound = True
                if theta is None:
                    theta = t
        elif _value_right(rate_fn, t) < lam * p - 1e-11 * max(1.0, lam * p):
            compound = False

        if not compound:
            kind, when = _pinned_until(lam, er, t, seg_end, b, p)
            if kind == "touch":
                if when > t + _TIME_TOL:
                    legs.append(_Leg(t, when, True, b, p))
                t, b = when, p
                compound = True
                if theta is None:
                    theta = t
            else:
                legs.append(_Leg(t, seg_end, True, b, p))
                b = b + lam * p * (seg_end - t) - er.integral(t, seg_end)
                t = seg_end
        else:
            kind, when = _compound_until(lam, er, t, seg_end, b)
            if kind == "payoff":
                if when > t + _TIME_TOL:
                    legs.append(_Leg(t, when, False, b, p))
                tau, stop, final_b = when, StopKind.PAID_OFF, 0.0
                b = 0.0
                break
            b_new = math.exp(lam * (when - t)) * (
                b - math.exp(lam * t) * rate_fn.integral(t, when, lam)
            )
            if when > t + _TIME_TOL:
                legs.append(_Leg(t, when, False, b, p))
            b = max(b_new, 0.0)
            p = b
            t = when
            if kind == "flatten":
                compound = False

    if stop is StopKind.FORGIVEN:
        final_b = b
        tau = horizon
    return _SimpleRun(tuple(legs), tau, stop, theta if theta is not None else horizon, final_b)


def _leg_state(leg: _Leg, lam: float, rate_fn: RateFunction, t: float) -> tuple[float, float]:
    """(balance, principal) at time t inside a leg, from the closed forms."""
    if leg.pinned:
        b = leg.b0 + lam * leg.p0 * (t - leg.t0) - rate_fn.integral(leg.t0, t)
        return b, leg.p0
    b = math.exp(lam * (t - leg.t0)) * (
        leg.b0 - math.exp(lam * leg.t0) * rate_fn.integral(leg.t0, t, lam)
    )
    return b, b


def simulate_simple(
    terms: LoanTerms,
    x: float,
    strategy: Strategy,
    bounds: PaymentBounds,
    step_hint: float | None = None,
) -> Trajectory:
    """Integrate the simple-interest dynamics, returning a sampled trajectory.

    The principal is the running minimum of the balance; between events the
    path follows exact affine (principal pinned) or exponential (balance on
    the principal, falling) solutions, and regime changes are located by
    bracketed root finding.
    """
    if x <= 0.0:
        raise ValueError("initial balance must be positive")
    rate_fn = realize(strategy, bounds)
    run = _simulate_core(terms, rate_fn, x)
    lam = terms.loan_rate
    r = terms.r

    step = step_hint if step_hint and step_hint > 0 else bounds.horizon / 400.0
    samples: list[TrajectorySample] = []

    def push(t: float, b: float, p: float) -> None:
        if samples and t <= samples[-1].t + _TIME_TOL:
            return
        b = max(b, 0.0)
        p = max(min(p, b), 0.0)
        samples.append(
            TrajectorySample(
                t=t,
                balance=b,
                principal=p,
                rate=rate_fn.value(t) if t > 0 else _value_right(rate_fn, 0.0),
                discounted_paid=rate_fn.integral(0.0, t, r),
            )
        )

    for leg in run.legs:
        b0, p0 = _leg_state(leg, lam, rate_fn, leg.t0)
        push(leg.t0, b0, p0)
        n = max(1, int(math.ceil((leg.t1 - leg.t0) / step)))
        for i in range(1, n):
            t = leg.t0 + (leg.t1 - leg.t0) * i / n
            b, p = _leg_state(leg, lam, rate_fn, t)
            push(t, b, p)
    # Terminal sample at the stopping time.
    if run.stop_kind is StopKind.PAID_OFF:
        push(run.tau, 0.0, 0.0)
    else:
        if run.legs:
            b, p = _leg_state(run.legs[-1], lam, rate_fn, run.tau)
        else:
            b, p = x, x
        push(run.tau, b, p)

    return Trajectory(
        samples=tuple(samples),
        stop_time=run.tau,
        stop_kind=run.stop_kind,
        theta=run.theta,
        final_balance=run.final_balance,
    )


# ---------------------------------------------------------------------------
# Shared operations
# ---------------------------------------------------------------------------

def payoff_time(
    terms: LoanTerms,
    x: float,
    strategy: Strategy,
    bounds: PaymentBounds,
    mode: Mode = Mode.COMPOUND,
) -> tuple[float, StopKind]:
    """First time the balance hits zero, capped at the horizon."""
    if x <= 0.0:
        raise ValueError("initial balance must be positive")
    rate_fn = realize(strategy, bounds)
    if mode is Mode.COMPOUND:
        return _payoff_time_compound(terms, x, rate_fn)
    run = _simulate_core(terms, rate_fn, x)
    return run.tau, run.stop_kind


def cost(
    terms: LoanTerms,
    x: float,
    strategy: Strategy,
    bounds: PaymentBounds,
    mode: Mode = Mode.COMPOUND,
) -> ValuationResult:
    """Present value of payments plus the discounted tax on any forgiveness."""
    if x <= 0.0:
        raise ValueError("initial balance must be positive")
    rate_fn = realize(strategy, bounds)
    lam = terms.loan_rate
    if mode is Mode.COMPOUND:
        tau, stop = _payoff_time_compound(terms, x, rate_fn)
        if stop is StopKind.PAID_OFF:
            b_tau = 0.0
        else:
            b_tau = max(math.exp(lam * tau) * (x - rate_fn.integral(0.0, tau, lam)), 0.0)
    else:
        run = _simulate_core(terms, rate_fn, x)
        tau, stop, b_tau = run.tau, run.stop_kind, max(run.final_balance, 0.0)

    paid = rate_fn.integral(0.0, tau, terms.r)
    tax = terms.omega * b_tau * math.exp(-terms.r * tau)
    return ValuationResult(
        cost=paid + tax,
        strategy=strategy,
        tau=tau,
        forgiven_balance=b_tau,
        tax_payment=tax,
    )


def trajectory_compound(
    terms: LoanTerms,
    x: float,
    strategy: Strategy,
    bounds: PaymentBounds,
    step_hint: float | None = None,
) -> Trajectory:
    """Sampled compound-interest path; principal reported as the running min."""
    if x <= 0.0:
        raise ValueError("initial balance must be positive")
    rate_fn = realize(strategy, bounds)
    lam = terms.loan_rate
    tau, stop = _payoff_time_compound(terms, x, rate_fn)

    step = step_hint if step_hint and step_hint > 0 else bounds.horizon / 400.0
    n = max(1, int(math.ceil(tau / step)))
    times = sorted({0.0, tau, *(tau * i / n for i in range(1, n))})
    samples = []
    running_min = x
    theta = None
    for t in times:
        b = math.exp(lam * t) * (x - rate_fn.integral(0.0, t, lam))
        b = max(b, 0.0) if t >= tau - _TIME_TOL else b
        running_min = min(running_min, b)
        if theta is None and b < x - _BAL_TOL * max(1.0, x):
            theta = t
        samples.append(
            TrajectorySample(
                t=t,
                balance=max(b, 0.0),
                principal=max(running_min, 0.0),
                rate=rate_fn.value(t) if t > 0 else _value_right(rate_fn, 0.0),
                discounted_paid=rate_fn.integral(0.0, t, terms.r),
            )
        )
    final_b = 0.0 if stop is StopKind.PAID_OFF else samples[-1].balance
    return Trajectory(
        samples=tuple(samples),
        stop_time=tau,
        stop_kind=stop,
        theta=theta if theta is not None else bounds.horizon,
        final_balance=final_b,
    )
