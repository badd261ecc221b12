"""Scalar numerical routines: bracketed root finding and adaptive quadrature.

All roots in this package are bracketed and (piecewise) monotone, so a
bisection loop with bracket-preserving secant acceleration is both robust
and fast.  The quadrature routine exists mainly as an independent check on
the closed-form integrals used elsewhere.
"""

from __future__ import annotations

import math
from typing import Callable


class BracketError(Exception):
    """The supplied interval does not bracket a sign change."""


def bracket_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    xtol: float = 1e-12,
    max_iter: int = 200,
) -> float:
    """Find a root of ``f`` in ``[lo, hi]``, which must bracket a sign change.

    Bisection with secant refinement: the secant proposal is accepted only
    when it falls strictly inside the current bracket, so convergence is
    never worse than bisection.  Terminates when the bracket width drops
    below ``xtol``.
    """
    if hi < lo:
        lo, hi = hi, lo
    flo = f(lo)
    if flo == 0.0:
        return lo
    fhi = f(hi)
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise BracketError(f"no sign change on [{lo}, {hi}]: f={flo}, {fhi}")

    for _ in range(max_iter):
        if hi - lo <= xtol:
            break
        mid = 0.5 * (lo + hi)
        # Secant proposal from the bracket endpoints.
        denom = fhi - flo
        if denom != 0.0:
            sec = lo - flo * (hi - lo) / denom
            # Keep it a meaningful fraction inside the bracket.
            margin = 0.01 * (hi - lo)
            if lo + margin < sec < hi - margin:
                mid = sec
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if flo * fmid < 0.0:
            hi, fhi = mid, fmid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    *,
    tol: float = 1e-10,
    max_depth: int = 50,
) -> float:
    """Adaptive Simpson quadrature of ``f`` on ``[a, b]`` to absolute ``tol``."""
    if a == b:
        return 0.0

    def simpson(lo: float, hi: float, flo: float, fmid: float, fhi: float) -> float:
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)

    def recurse(lo, hi, flo, fmid, fhi, whole, eps, depth):
        mid = 0.5 * (lo + hi)
        lmid = 0.5 * (lo + mid)
        rmid = 0.5 * (mid + hi)
        flmid = f(lmid)
        frmid = f(rmid)
        left = simpson(lo, mid, flo, flmid, fmid)
        right = simpson(mid, hi, fmid, frmid, fhi)
        # Richardson correction: error of the refined estimate ~ |diff| / 15.
        diff = left + right - whole
        if depth >= max_depth or abs(diff) <= 15.0 * eps:
            return left + right + diff / 15.0
        return recurse(lo, mid, flo, flmid, fmid, left, eps / 2.0, depth + 1) + recurse(
            mid, hi, fmid, frmid, fhi, right, eps / 2.0, depth + 1
        )

    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = simpson(a, b, fa, fm, fb)
    return recurse(a, b, fa, fm, fb, whole, tol, 0)


def expm1_over(k: float, dt: float) -> float:
    """Stable evaluation of ``(e^{k*dt} - 1) / k``; the limit ``dt`` as k -> 0."""
    z = k * dt
    if abs(z) < 1e-12:
        return dt * (1.0 + 0.5 * z + z * z / 6.0)
    return math.expm1(z) / k
