"""Simple-interest analysis: regimes, strategy-improvement operators, and
numerical optimization for the intermediate regime.

Under simple interest only the principal (the running minimum of the
balance) accrues interest, so the first time of principal repayment --
``theta`` -- splits the life of the loan: before theta any payment stream is
improved by paying the minimum first and the maximum afterwards, and while
the principal is falling, maximum payments should precede minimum ones.
Those two facts settle the very-large and very-small regimes exactly, and
motivate the structured min/max/min search used in between.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .compound import optimal_strategy_compound
from .dynamics import _simulate_core, _leg_state, realize
from .dynamics import cost as plan_cost
from .model import (
    DomainError,
    LoanTerms,
    MaxRate,
    MinRate,
    Mode,
    PaymentBounds,
    ResourceLimitError,
    Segment,
    StopKind,
    Strategy,
    ValuationResult,
)
from .numerics import bracket_root

_TIME_TOL = 1e-11


@dataclass(frozen=True)
class PrincipalClock:
    """First principal-repayment times: for the strategy, and at both bounds.

    For any admissible strategy, 0 <= theta(max) <= theta <= theta(min) <= T.
    """

    theta: float
    theta_of_max: float
    theta_of_min: float


class Regime(Enum):
    VERY_LARGE = "very_large"  # even maximum payments never touch the principal
    VERY_SMALL = "very_small"  # even minimum payments repay principal at once
    INTERMEDIATE = "intermediate"


@dataclass(frozen=True)
class RegimeClass:
    tag: Regime
    theta_of_max: float
    theta_of_min: float


@dataclass(frozen=True)
class Improvement:
    """Result of a strategy-improvement operator."""

    strategy: Strategy
    rule: str  # "interest-reorder" | "min-only" | "principal-reorder" | "noop"
    changed: bool


def _theta(terms: LoanTerms, x: float, strategy: Strategy, bounds: PaymentBounds) -> float:
    return _simulate_core(terms, realize(strategy, bounds), x).theta


def principal_clock(
    terms: LoanTerms, x: float, strategy: Strategy, bounds: PaymentBounds
) -> PrincipalClock:
    """Theta of the given strategy alongside the max- and min-payment clocks."""
    if x <= 0.0:
        raise ValueError("balance must be positive")
    horizon = bounds.horizon
    return PrincipalClock(
        theta=_theta(terms, x, strategy, bounds),
        theta_of_max=_theta(terms, x, Strategy.max_only(horizon), bounds),
        theta_of_min=_theta(terms, x, Strategy.min_only(horizon), bounds),
    )


def classify_regime(terms: LoanTerms, x: float, bounds: PaymentBounds) -> RegimeClass:
    """Very large / very small / intermediate, from the bound clocks."""
    if x <= 0.0:
        raise ValueError("balance must be positive")
    horizon = bounds.horizon
    theta_max = _theta(terms, x, Strategy.max_only(horizon), bounds)
    theta_min = _theta(terms, x, Strategy.min_only(horizon), bounds)
    if theta_max >= horizon - _TIME_TOL:
        tag = Regime.VERY_LARGE
    elif theta_min <= _TIME_TOL and bounds.minimum.is_nondecreasing():
        tag = Regime.VERY_SMALL
    else:
        tag = Regime.INTERMEDIATE
    return RegimeClass(tag=tag, theta_of_max=theta_max, theta_of_min=theta_min)


# ---------------------------------------------------------------------------
# Improvement operators
# ---------------------------------------------------------------------------

def _tail_segments(strategy: Strategy, after: float) -> list[Segment]:
    """Segments of the strategy restricted to (after, horizon]."""
    out = []
    for seg in strategy.segments:
        if seg.end > after + _TIME_TOL:
            out.append(Segment(seg.end, seg.policy))
    return out


def _rates_agree(a, b, lo: float, hi: float) -> bool:
    pts = {lo, hi}
    for rf in (a, b):
        for p in rf.pieces:
            if lo < p.start < hi:
                pts.add(p.start)
            if lo < p.end < hi:
                pts.add(p.end)
    pts = sorted(pts)
    for t0, t1 in zip(pts, pts[1:]):
        if t1 - t0 < 1e-9:  # sliver from root-finder jitter, measure ~ 0
            continue
        mid = 0.5 * (t0 + t1)
        va, vb = a.value(mid), b.value(mid)
        if abs(va - vb) > 1e-9 * max(1.0, abs(va), abs(vb)):
            return False
    return True


def improve_interest_phase(
    terms: LoanTerms, x: float, strategy: Strategy, bounds: PaymentBounds
) -> Improvement:
    """Reorder payments before theta to min-then-max, preserving theta.

    Keeps total payments over [0, theta] fixed (so theta is unchanged) while
    pushing the large payments later, which lowers their present value; the
    cost never increases.  If the principal is never repaid, the minimum-only
    plan is at least as cheap and is returned instead.
    """
    if x <= 0.0:
        raise ValueError("balance must be positive")
    horizon = bounds.horizon
    rate_fn = realize(strategy, bounds)
    theta = _simulate_core(terms, rate_fn, x).theta

    if theta >= horizon - _TIME_TOL:
        min_only = Strategy.min_only(horizon)
        changed = not _rates_agree(rate_fn, realize(min_only, bounds), 0.0, horizon)
        return Improvement(min_only, rule="min-only", changed=changed)

    paid = rate_fn.integral(0.0, theta)

    def excess(t0: float) -> float:
        # Total payments of min-on-[0,t0], max-after versus the original;
        # strictly decreasing in t0.
        return (
            bounds.minimum.integral(0.0, t0)
            + bounds.maximum.integral(t0, theta)
            - paid
        )

    top = excess(0.0)
    bottom = excess(theta)
    if top <= 1e-12 * max(1.0, paid):
        t0 = 0.0
    elif bottom >= -1e-12 * max(1.0, paid):
        t0 = theta
    else:
        t0 = bracket_root(excess, 0.0, theta, xtol=1e-13)

    segments: list[Segment] = []
    if t0 > _TIME_TOL:
        segments.append(Segment(t0, MinRate()))
    if theta > t0 + _TIME_TOL:
        segments.append(Segment(theta, MaxRate()))
    segments.extend(_tail_segments(strategy, theta))
    improved = Strategy(tuple(segments))

    changed = not _rates_agree(rate_fn, realize(improved, bounds), 0.0, theta)
    return Improvement(improved, rule="interest-reorder", changed=changed)


def _is_max_then_min(rate_fn, bounds: PaymentBounds, lo: float, hi: float) -> bool:
    """Is the realized rate max-then-min (with one switch) on [lo, hi]?"""
    pts = {lo, hi}
    for rf in (rate_fn, bounds.minimum, bounds.maximum):
        for p in rf.pieces:
            if lo < p.start < hi:
                pts.add(p.start)
            if lo < p.end < hi:
                pts.add(p.end)
    pts = sorted(pts)
    pattern = []
    for t0, t1 in zip(pts, pts[1:]):
        mid = 0.5 * (t0 + t1)
        v = rate_fn.value(mid)
        if abs(v - bounds.maximum.value(mid)) <= 1e-9 * max(1.0, v):
            pattern.append("M")
        elif abs(v - bounds.minimum.value(mid)) <= 1e-9 * max(1.0, v):
            pattern.append("m")
        else:
            return False
    switched = False
    for prev, cur in zip(pattern, pattern[1:]):
        if prev == "m" and cur == "M":
            return False
        if prev == "M" and cur == "m":
            switched = True
    return True


def improve_principal_phase(
    terms: LoanTerms,
    x: float,
    strategy: Strategy,
    bounds: PaymentBounds,
    a: float,
    c: float,
) -> Improvement:
    """Reorder payments on [a, c] (principal strictly falling there) to
    max-then-min, matching the original balance at c; cost strictly drops.

    The switch time is chosen so the discounted payment mass on [a, c] is
    preserved, then nudged down until the simple-interest balance at c
    matches the original (the largest such time is taken).
    """
    if x <= 0.0:
        raise ValueError("balance must be positive")
    horizon = bounds.horizon
    if not (0.0 <= a < c <= horizon + 1e-12):
        raise ValueError(f"need 0 <= a < c <= horizon, got a={a}, c={c}")
    rate_fn = realize(strategy, bounds)
    run = _simulate_core(terms, rate_fn, x)
    if run.theta > a + _TIME_TOL:
        raise ValueError(f"principal repayment starts at {run.theta}, after a={a}")
    # The principal falls on [a, c] only while the balance rides on it.
    covered_to = a
    for leg in run.legs:
        if leg.t1 <= a + _TIME_TOL or leg.t0 >= c - _TIME_TOL:
            continue
        if leg.pinned:
            raise ValueError(
                f"principal is not strictly decreasing on [{a}, {c}] "
                f"(pinned on [{leg.t0:.6g}, {leg.t1:.6g}])"
            )
        covered_to = max(covered_to, leg.t1)
    if covered_to < c - _TIME_TOL:
        raise ValueError(f"trajectory stops at {covered_to}, before c={c}")

    if _is_max_then_min(rate_fn, bounds, a, c):
        return Improvement(strategy, rule="noop", changed=False)

    lam = terms.loan_rate
    mass = rate_fn.integral(a, c, lam)

    def mass_gap(s0: float) -> float:
        return (
            bounds.maximum.integral(a, s0, lam)
            + bounds.minimum.integral(s0, c, lam)
            - mass
        )

    s0 = bracket_root(mass_gap, a, c, xtol=1e-13)

    def candidate(u: float) -> Strategy:
        segments: list[Segment] = []
        for seg in strategy.segments:
            if seg.end <= a + _TIME_TOL:
                segments.append(seg)
            else:
                covered = segments[-1].end if segments else 0.0
                if a > covered + _TIME_TOL:
                    segments.append(Segment(a, seg.policy))
                break
        if u > a + _TIME_TOL:
            segments.append(Segment(u, MaxRate()))
        if c > u + _TIME_TOL:
            segments.append(Segment(c, MinRate()))
        segments.extend(_tail_segments(strategy, c))
        return Strategy(tuple(segments))

    def balance_at_c(strat: Strategy) -> float:
        rf = realize(strat, bounds)
        r = _simulate_core(terms, rf, x)
        if r.tau < c - _TIME_TOL:
            return 0.0
        for leg in r.legs:
            if leg.t0 - _TIME_TOL <= c <= leg.t1 + _TIME_TOL:
                return _leg_state(leg, lam, rf, min(c, leg.t1))[0]
        return r.final_balance

    target = balance_at_c(strategy)
    gap_s0 = balance_at_c(candidate(s0)) - target
    if gap_s0 >= -1e-11 * max(1.0, target):
        u = s0
    else:
        # Walk down from s0 until the candidate balance overshoots, then
        # bracket; this picks the largest matching switch time.
        lo, hi = a, s0
        probe = s0
        for _ in range(64):
            probe = a + (probe - a) * 0.85
            if balance_at_c(candidate(probe)) - target > 0.0:
                lo = probe
                break
            hi = probe
        u = bracket_root(lambda v: balance_at_c(candidate(v)) - target, lo, hi, xtol=1e-12)

    return Improvement(candidate(u), rule="principal-reorder", changed=True)


def marginal_cost(terms: LoanTerms, mode: Mode) -> float:
    """Present cost of one extra borrowed dollar in the large-balance regime.

    Compound: omega e^{beta T} (tax on its exponentially grown forgiven value).
    Simple:   omega e^{-r T} (1 + (r+beta) T) (interest accrues linearly).
    """
    horizon = terms.horizon
    if mode is Mode.COMPOUND:
        return terms.omega * math.exp(terms.beta * horizon)
    return (
        terms.omega
        * math.exp(-terms.r * horizon)
        * (1.0 + terms.loan_rate * horizon)
    )


# ---------------------------------------------------------------------------
# Structured optimizer for the intermediate regime
# ---------------------------------------------------------------------------

def _simple_cost(
    terms: LoanTerms, x: float, strategy: Strategy, bounds: PaymentBounds
) -> float:
    return plan_cost(terms, x, strategy, bounds, Mode.SIMPLE).cost


def optimize_simple(
    terms: LoanTerms, x: float, bounds: PaymentBounds, grid_n: int = 96
) -> tuple[Strategy, ValuationResult]:
    """Best simple-interest plan: proven optimum in the extreme regimes,
    otherwise a min/max/min switch-time search (flagged heuristic).

    The two switch times are scanned over a triangular grid and polished by
    golden-section refinement; every candidate is scored by exact simulation.
    """
    if x <= 0.0:
        raise ValueError("balance must be positive")
    if grid_n < 2:
        raise ValueError("grid_n must be at least 2")
    horizon = bounds.horizon
    regime = classify_regime(terms, x, bounds)

    if regime.tag is Regime.VERY_LARGE:
        strategy = Strategy.min_only(horizon)
        return strategy, plan_cost(terms, x, strategy, bounds, Mode.SIMPLE)
    if regime.tag is Regime.VERY_SMALL:
        strategy, _ = optimal_strategy_compound(terms, bounds, x)
        return strategy, plan_cost(terms, x, strategy, bounds, Mode.SIMPLE)

    def score(t0: float, t1: float) -> float:
        return _simple_cost(terms, x, Strategy.min_max_tail(t0, t1, horizon), bounds)

    grid = np.linspace(0.0, horizon, grid_n)
    best = (math.inf, 0.0, 0.0)
    for i, t0 in enumerate(grid):
        for t1 in grid[i:]:
            value = score(t0, t1)
            if value < best[0]:
                best = (value, t0, t1)

    # Golden-section polish, one coordinate at a time within one grid cell.
    step = horizon / (grid_n - 1)
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    _, t0, t1 = best

    def polish(fix_first: bool, lo: float, hi: float) -> float:
        a_, b_ = lo, hi
        c_ = b_ - invphi * (b_ - a_)
        d_ = a_ + invphi * (b_ - a_)
        fc = score(c_, t1) if fix_first else score(t0, c_)
        fd = score(d_, t1) if fix_first else score(t0, d_)
        for _ in range(40):
            if b_ - a_ < 1e-10:
                break
            if fc < fd:
                b_, d_, fd = d_, c_, fc
                c_ = b_ - invphi * (b_ - a_)
                fc = score(c_, t1) if fix_first else score(t0, c_)
            else:
                a_, c_, fc = c_, d_, fd
                d_ = a_ + invphi * (b_ - a_)
                fd = score(d_, t1) if fix_first else score(t0, d_)
        return 0.5 * (a_ + b_)

    for _ in range(2):
        t0 = polish(True, max(0.0, t0 - step), min(t1, t0 + step))
        t1 = polish(False, max(t0, t1 - step), min(horizon, t1 + step))

    strategy = Strategy.min_max_tail(t0, t1, horizon)
    result = plan_cost(terms, x, strategy, bounds, Mode.SIMPLE)
    if result.cost > best[0]:
        strategy = Strategy.min_max_tail(best[1], best[2], horizon)
        result = plan_cost(terms, x, strategy, bounds, Mode.SIMPLE)
    return strategy, dataclasses.replace(result, strategy=strategy, heuristic=True)


# ---------------------------------------------------------------------------
# Brute-force dynamic-programming oracle
# ---------------------------------------------------------------------------

MAX_TIME_STEPS = 64
MAX_STATE_CELLS = 128


@dataclass(frozen=True)
class DpResult:
    """Discretized minimal cost with its greedy policy trace.

    ``refine_delta`` is the cost change when the time grid is halved -- a
    convergence indicator, reported rather than asserted.
    """

    cost: float
    policy: tuple[str, ...]
    refine_delta: float


def _vec_expm1_over(k: float, dt: np.ndarray) -> np.ndarray:
    z = k * dt
    small = np.abs(z) < 1e-12
    out = np.empty_like(dt, dtype=float)
    out[small] = dt[small] * (1.0 + 0.5 * z[small])
    kk = k if abs(k) > 0 else 1.0
    out[~small] = np.expm1(z[~small]) / kk
    return out


def _spans(rate_fn, t0: float, t1: float, parts: int = 1) -> list[tuple[float, float]]:
    """[t0, t1] split at rate-piece boundaries and into ``parts`` sub-steps."""
    cuts = {t0, t1}
    for p in rate_fn.pieces:
        if t0 < p.start < t1:
            cuts.add(p.start)
        if t0 < p.end < t1:
            cuts.add(p.end)
    for i in range(1, parts):
        cuts.add(t0 + (t1 - t0) * i / parts)
    cuts = sorted(cuts)
    return [(u, v) for u, v in zip(cuts, cuts[1:]) if v > u + 1e-15]


def _rate_at(rate_fn, t: float):
    for p in rate_fn.pieces:
        if p.start - 1e-12 <= t < p.end:
            return p.rate
    return rate_fn.pieces[-1].rate


def _dp_compound(
    terms: LoanTerms, x: float, bounds: PaymentBounds, steps: int, n_cells: int
) -> tuple[float, tuple[str, ...]]:
    lam, r = terms.loan_rate, terms.r
    horizon = bounds.horizon
    controls = (bounds.minimum, bounds.maximum)
    labels = ("min", "max")

    bmax = x * math.exp(lam * horizon)
    grid = np.unique(np.append(np.linspace(0.0, bmax, n_cells), x))
    times = np.linspace(0.0, horizon, steps + 1)

    def propagate(b: np.ndarray, rf, t0: float, t1: float):
        """One step of exact compound dynamics; returns (pay, b_end, paid)."""
        b_cur = b.copy()
        pay = np.zeros_like(b_cur)
        paid = b_cur <= 0.0
        for u0, u1 in _spans(rf, t0, t1):
            er = _rate_at(rf, u0)
            alpha0 = er.value(u0)
            k = er.growth - lam
            du = u1 - u0
            drained = alpha0 * (math.expm1(k * du) / k if abs(k) > 1e-14 else du)
            live = ~paid
            # Payoff inside the span: e^{k s} = 1 + k b / alpha0.
            z = np.where(live, k * b_cur / alpha0, 0.0)
            with np.errstate(invalid="ignore", divide="ignore"):
                if abs(k) > 1e-14:
                    s_star = np.where(z > -1.0, np.log1p(np.clip(z, -1.0 + 1e-300, None)) / k, np.inf)
                else:
                    s_star = b_cur / alpha0
            hits = live & (s_star <= du * (1.0 + 1e-15))
            if np.any(hits):
                s = np.clip(s_star[hits], 0.0, du)
                kr = er.growth - r
                pay[hits] += alpha0 * math.exp(-r * u0) * _vec_expm1_over(kr, s)
                b_cur[hits] = 0.0
                paid = paid | hits
                live = ~paid
            pay[live] += er.integral(u0, u1, r)
            b_cur[live] = math.exp(lam * du) * (b_cur[live] - drained)
        return pay, b_cur, paid

    values = [None] * (steps + 1)
    # Stage costs are discounted to time zero, so the terminal tax is too.
    values[steps] = terms.omega * math.exp(-r * horizon) * grid
    for k in range(steps - 1, -1, -1):
        v_next = values[k + 1]
        slope = (v_next[-1] - v_next[-2]) / (grid[-1] - grid[-2])
        best = None
        for rf in controls:
            pay, b_end, paid = propagate(grid, rf, times[k], times[k + 1])
            cont = np.interp(b_end, grid, v_next)
            high = b_end > grid[-1]
            cont[high] = v_next[-1] + slope * (b_end[high] - grid[-1])
            cand = pay + np.where(paid, 0.0, cont)
            best = cand if best is None else np.minimum(best, cand)
        values[k] = best

    # Forward greedy trace from the actual balance.
    policy = []
    b = np.array([x])
    for k in range(steps):
        v_next = values[k + 1]
        slope = (v_next[-1] - v_next[-2]) / (grid[-1] - grid[-2])
        scores = []
        outcomes = []
        for rf in controls:
            pay, b_end, paid = propagate(b, rf, times[k], times[k + 1])
            cont = np.interp(b_end, grid, v_next)
            if b_end[0] > grid[-1]:
                cont[0] = v_next[-1] + slope * (b_end[0] - grid[-1])
            scores.append(float(pay[0] + (0.0 if paid[0] else cont[0])))
            outcomes.append((b_end.copy(), bool(paid[0])))
        pick = int(np.argmin(scores))
        policy.append(labels[pick])
        b, was_paid = outcomes[pick]
        if was_paid:
            policy.extend(labels[0] for _ in range(k + 1, steps))
            break

    start = int(np.searchsorted(grid, x))
    return float(values[0][start]), tuple(policy)


def _dp_simple(
    terms: LoanTerms, x: float, bounds: PaymentBounds, steps: int, n_cells: int
) -> tuple[float, tuple[str, ...]]:
    lam, r = terms.loan_rate, terms.r
    horizon = bounds.horizon
    controls = (bounds.minimum, bounds.maximum)
    labels = ("min", "max")

    bmax = x * (1.0 + lam * horizon)
    b_grid = np.unique(np.append(np.linspace(0.0, bmax, n_cells), x))
    p_grid = np.linspace(0.0, x, n_cells)
    nb, npg = len(b_grid), len(p_grid)
    B, P = np.meshgrid(b_grid, p_grid, indexing="ij")
    times = np.linspace(0.0, horizon, steps + 1)
    substeps = 8

    def interp2(v: np.ndarray, bq: np.ndarray, pq: np.ndarray) -> np.ndarray:
        """Bilinear on (b_grid, p_grid) with linear extrapolation in b above."""
        pq = np.clip(pq, p_grid[0], p_grid[-1])
        bi = np.clip(np.searchsorted(b_grid, bq) - 1, 0, nb - 2)
        pi = np.clip(np.searchsorted(p_grid, pq) - 1, 0, npg - 2)
        b0, b1 = b_grid[bi], b_grid[bi + 1]
        p0, p1 = p_grid[pi], p_grid[pi + 1]
        wb = np.clip((bq - b0) / (b1 - b0), 0.0, 1.0)
        wp = (pq - p0) / (p1 - p0)
        out = (
            v[bi, pi] * (1 - wb) * (1 - wp)
            + v[bi + 1, pi] * wb * (1 - wp)
            + v[bi, pi + 1] * (1 - wb) * wp
            + v[bi + 1, pi + 1] * wb * wp
        )
        high = bq > b_grid[-1]
        if np.any(high):
            slope = (v[-1, :] - v[-2, :]) / (b_grid[-1] - b_grid[-2])
            vp = v[-1, pi] * (1 - wp) + v[-1, pi + 1] * wp
            sp = slope[pi] * (1 - wp) + slope[pi + 1] * wp
            out = np.where(high, vp + sp * (bq - b_grid[-1]), out)
        return out

    def propagate(b: np.ndarray, p: np.ndarray, rf, t0: float, t1: float):
        b_cur = b.copy()
        p_cur = p.copy()
        pay = np.zeros_like(b_cur)
        done = b_cur <= 0.0
        for u0, u1 in _spans(rf, t0, t1, parts=substeps):
            er = _rate_at(rf, u0)
            alpha0 = er.value(u0)
            du = u1 - u0
            live = ~done
            pe = np.minimum(p_cur, b_cur)
            on_principal = live & (b_cur <= pe + 1e-12 * np.maximum(1.0, pe))
            falling = on_principal & (alpha0 > lam * pe)
            k = er.growth - lam
            drained = alpha0 * (math.expm1(k * du) / k if abs(k) > 1e-14 else du)

            # Falling branch: exact compound decay, with in-span payoff.
            if np.any(falling):
                z = k * b_cur / alpha0
                with np.errstate(invalid="ignore", divide="ignore"):
                    if abs(k) > 1e-14:
                        s_star = np.where(
                            z > -1.0,
                            np.log1p(np.clip(z, -1.0 + 1e-300, None)) / k,
                            np.inf,
                        )
                    else:
                        s_star = b_cur / alpha0
                hits = falling & (s_star <= du * (1.0 + 1e-15))
                if np.any(hits):
                    s = np.clip(s_star[hits], 0.0, du)
                    kr = er.growth - r
                    pay[hits] += alpha0 * math.exp(-r * u0) * _vec_expm1_over(kr, s)
                    b_cur[hits] = 0.0
                    p_cur[hits] = 0.0
                    done = done | hits
                falling = falling & ~done
                bf = math.exp(lam * du) * (b_cur[falling] - drained)
                b_cur[falling] = bf
                p_cur[falling] = np.minimum(p_cur[falling], bf)

            # Pinned branch: affine in time (interest flows on the principal).
            pinned = live & ~falling & ~done
            if np.any(pinned):
                undiscounted = er.integral(u0, u1)
                bn = b_cur[pinned] + lam * pe[pinned] * du - undiscounted
                neg = bn < 0.0
                if np.any(neg):
                    # Rare: payments overshoot zero within the span (tiny
                    # principal); locate the zero by vector bisection.
                    neg_mask = np.zeros_like(pinned)
                    neg_mask[pinned] = neg
                    lo = np.zeros(int(neg.sum()))
                    hi = np.full(len(lo), du)
                    b0v = b_cur[neg_mask]
                    pev = pe[neg_mask]
                    for _ in range(60):
                        mid = 0.5 * (lo + hi)
                        amid = alpha0 * (
                            np.expm1(er.growth * mid) / er.growth
                            if abs(er.growth) > 1e-14
                            else mid
                        )
                        bmid = b0v + lam * pev * mid - amid
                        take = bmid > 0.0
                        lo = np.where(take, mid, lo)
                        hi = np.where(take, hi, mid)
                    s = 0.5 * (lo + hi)
                    kr = er.growth - r
                    pay[neg_mask] += alpha0 * math.exp(-r * u0) * _vec_expm1_over(kr, s)
                    b_cur[neg_mask] = 0.0
                    p_cur[neg_mask] = 0.0
                    done = done | neg_mask
                    pinned = pinned & ~neg_mask
                    bn = bn[~neg]
                b_cur[pinned] = np.maximum(bn, 0.0)
                p_cur[pinned] = np.minimum(p_cur[pinned], b_cur[pinned])

            survivors = falling | pinned  # live at span start, not paid off in it
            pay[survivors] += er.integral(u0, u1, r)
        return pay, b_cur, p_cur, done

    values = [None] * (steps + 1)
    # Stage costs are discounted to time zero, so the terminal tax is too.
    values[steps] = terms.omega * math.exp(-r * horizon) * B
    for k in range(steps - 1, -1, -1):
        v_next = values[k + 1]
        best = None
        for rf in controls:
            pay, b_end, p_end, done = propagate(B, P, rf, times[k], times[k + 1])
            cand = pay + np.where(done, 0.0, interp2(v_next, b_end, p_end))
            best = cand if best is None else np.minimum(best, cand)
        values[k] = best

    policy = []
    b = np.array([x])
    p = np.array([x])
    for k in range(steps):
        v_next = values[k + 1]
        scores = []
        outcomes = []
        for rf in controls:
            pay, b_end, p_end, done = propagate(b, p, rf, times[k], times[k + 1])
            val = pay[0] + (0.0 if done[0] else float(interp2(v_next, b_end, p_end)[0]))
            scores.append(float(val))
            outcomes.append((b_end.copy(), p_end.copy(), bool(done[0])))
        pick = int(np.argmin(scores))
        policy.append(labels[pick])
        b, p, was_done = outcomes[pick]
        if was_done:
            policy.extend(labels[0] for _ in range(k + 1, steps))
            break

    bi = int(np.searchsorted(b_grid, x))
    return float(values[0][bi, -1]), tuple(policy)


def dp_oracle(
    terms: LoanTerms,
    x: float,
    bounds: PaymentBounds,
    time_steps: int = 64,
    state_cells: int = 128,
    mode: Mode = Mode.SIMPLE,
) -> DpResult:
    """Backward induction over a discretized state with bang-bang controls.

    Per step the cost and dynamics are affine in the payment rate, so the
    extreme rates suffice on each step.  Small instances only; the grid caps
    are enforced.  In compound mode the principal equals the balance and the
    unused axis is spent on extra balance resolution.
    """
    if x <= 0.0:
        raise ValueError("balance must be positive")
    if time_steps > MAX_TIME_STEPS or time_steps < 2:
        raise ResourceLimitError(f"time_steps must be in [2, {MAX_TIME_STEPS}]")
    if state_cells > MAX_STATE_CELLS or state_cells < 4:
        raise ResourceLimitError(f"state_cells must be in [4, {MAX_STATE_CELLS}]")

    if mode is Mode.COMPOUND:
        n1d = min(state_cells * state_cells, MAX_STATE_CELLS * MAX_STATE_CELLS)
        value, policy = _dp_compound(terms, x, bounds, time_steps, n1d)
        coarse, _ = _dp_compound(terms, x, bounds, max(2, time_steps // 2), n1d)
    else:
        value, policy = _dp_simple(terms, x, bounds, time_steps, state_cells)
        coarse, _ = _dp_simple(terms, x, bounds, max(2, time_steps // 2), state_cells)
    return DpResult(cost=value, policy=policy, refine_delta=abs(value - coarse))
