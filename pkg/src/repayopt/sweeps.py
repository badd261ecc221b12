"""Parameter sweeps behind the frontier and contour reports."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .compound import critical_balance, optimal_strategy_compound
from .model import LoanTerms, Mode, PaymentBounds
from .simple import optimize_simple


@dataclass(frozen=True)
class SweepAxis:
    """One swept parameter: a closed range sampled at ``steps`` points."""

    name: str
    lo: float
    hi: float
    steps: int

    def __post_init__(self) -> None:
        if self.steps < 2:
            raise ValueError(f"axis {self.name!r}: steps must be at least 2")
        if not (self.lo < self.hi):
            raise ValueError(f"axis {self.name!r}: need lo < hi")

    def points(self) -> list[float]:
        return [float(v) for v in np.linspace(self.lo, self.hi, self.steps)]


@dataclass(frozen=True)
class SweepSpec:
    """A sweep request: axes, fixed parameters, and output disposition."""

    axes: tuple[SweepAxis, ...]
    fixed: dict = field(default_factory=dict)
    output: str | None = None
    format: str = "csv"

    def __post_init__(self) -> None:
        if not self.axes:
            raise ValueError("a sweep needs at least one axis")
        if self.format not in ("csv", "json"):
            raise ValueError(f"unknown format {self.format!r}")

    def axis(self, name: str) -> SweepAxis:
        for ax in self.axes:
            if ax.name == name:
                return ax
        raise ValueError(f"sweep has no axis named {name!r}")


def frontier_rows(
    terms: LoanTerms,
    bounds: PaymentBounds,
    x_lo: float,
    x_hi: float,
    steps: int,
    mode: Mode = Mode.COMPOUND,
    grid_n: int = 32,
) -> list[dict]:
    """Optimal cost and cost-to-balance ratio over a balance sweep."""
    if steps < 2:
        raise ValueError("steps must be at least 2")
    if not (0.0 < x_lo < x_hi):
        raise ValueError("need 0 < x_lo < x_hi")
    rows = []
    for x in np.linspace(x_lo, x_hi, steps):
        x = float(x)
        if mode is Mode.COMPOUND:
            strategy, result = optimal_strategy_compound(terms, bounds, x)
        else:
            strategy, result = optimize_simple(terms, x, bounds, grid_n=grid_n)
        rows.append(
            {
                "x": x,
                "cost": result.cost,
                "cost_over_x": result.cost / x,
                "strategy": strategy.label(),
                "tau": result.tau,
            }
        )
    return rows


def contour_grid(
    base_terms: LoanTerms,
    bounds: PaymentBounds,
    beta_lo: float,
    beta_hi: float,
    beta_steps: int,
    r_lo: float,
    r_hi: float,
    r_steps: int,
) -> tuple[list[float], list[float], list[list[float]]]:
    """Critical balance on a (spread, discount-rate) grid.

    Returns (betas, rs, grid) with grid[i][j] at (rs[i], betas[j]).
    """
    if beta_steps < 2 or r_steps < 2:
        raise ValueError("steps must be at least 2")
    betas = [float(b) for b in np.linspace(beta_lo, beta_hi, beta_steps)]
    rs = [float(r) for r in np.linspace(r_lo, r_hi, r_steps)]
    grid = []
    for r in rs:
        row = []
        for beta in betas:
            terms = LoanTerms(
                r=r, beta=beta, omega=base_terms.omega, horizon=base_terms.horizon
            )
            row.append(critical_balance(terms, bounds))
        grid.append(row)
    return betas, rs, grid


def run_frontier(
    spec: SweepSpec, terms: LoanTerms, bounds: PaymentBounds
) -> list[dict]:
    """Frontier sweep from a spec; expects a single axis named ``x``."""
    ax = spec.axis("x")
    mode = Mode(spec.fixed.get("mode", "compound"))
    return frontier_rows(terms, bounds, ax.lo, ax.hi, ax.steps, mode)


def run_contour(
    spec: SweepSpec, terms: LoanTerms, bounds: PaymentBounds
) -> tuple[list[float], list[float], list[list[float]]]:
    """Contour sweep from a spec; expects axes named ``beta`` and ``r``."""
    beta_ax = spec.axis("beta")
    r_ax = spec.axis("r")
    return contour_grid(
        terms,
        bounds,
        beta_ax.lo,
        beta_ax.hi,
        beta_ax.steps,
        r_ax.lo,
        r_ax.hi,
        r_ax.steps,
    )
