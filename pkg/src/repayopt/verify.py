"""Self-check suites behind the ``verify`` CLI command.

Each suite returns (name, passed, detail) tuples; the CLI prints one line
per check and exits nonzero if anything fails.  The full-scale versions of
these checks live in the test suite; these run at a size suited to a quick
command-line gate.
"""

from __future__ import annotations

import math

import numpy as np

from .compound import optimal_strategy_compound, thresholds
from .dynamics import balance_compound, cost, simulate_simple
from .model import LoanTerms, Mode, Strategy
from .sampling import random_bounds, random_strategy, random_terms
from .schedules import BorrowerProfile, bounds_from_profile
from .simple import dp_oracle, improve_interest_phase, marginal_cost

Check = tuple[str, bool, str]

PAPER_TERMS = LoanTerms(r=0.03, beta=0.04, omega=0.4, horizon=25.0)


def suite_marginal() -> list[Check]:
    compound = marginal_cost(PAPER_TERMS, Mode.COMPOUND)
    simple = marginal_cost(PAPER_TERMS, Mode.SIMPLE)
    return [
        (
            "marginal-cost compound ~ 1.09",
            abs(compound - 1.09) <= 0.005,
            f"got {compound:.6f}",
        ),
        (
            "marginal-cost simple ~ 0.52",
            abs(simple - 0.52) <= 0.005,
            f"got {simple:.6f}",
        ),
    ]


def suite_comparison(n: int = 40, seed: int = 7) -> list[Check]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        terms = random_terms(rng)
        bounds = random_bounds(rng, terms.horizon, tabulated=bool(rng.integers(0, 2)))
        strategy = random_strategy(rng, bounds)
        x = float(rng.uniform(0.2, 3.0)) * bounds.maximum.integral(
            0.0, terms.horizon, terms.loan_rate
        )
        traj = simulate_simple(terms, x, strategy, bounds)
        for s in traj.samples:
            if s.t > traj.stop_time:
                break
            fb = balance_compound(terms, x, strategy, bounds, s.t)
            scale = max(1.0, x * math.exp(terms.loan_rate * s.t))
            worst = max(worst, (s.balance - fb) / scale)
    return [
        (
            "simple balance <= compound balance",
            worst <= 1e-8,
            f"worst relative excess {worst:.3e} over {n} draws",
        )
    ]


def suite_theorem_vs_dp(n: int = 4, seed: int = 11) -> list[Check]:
    rng = np.random.default_rng(seed)
    checks: list[Check] = []
    for i in range(n):
        terms = random_terms(rng, horizon=float(rng.uniform(8.0, 20.0)))
        bounds = random_bounds(rng, terms.horizon)
        th = thresholds(terms, bounds)
        x = float(rng.uniform(0.3, 2.0)) * th.x_star
        _, result = optimal_strategy_compound(terms, bounds, x)
        dp = dp_oracle(terms, x, bounds, time_steps=64, state_cells=128, mode=Mode.COMPOUND)
        rel = abs(result.cost - dp.cost) / dp.cost
        ok = result.cost <= dp.cost + dp.refine_delta + 1e-9 and rel <= 0.01
        checks.append(
            (
                f"theorem-vs-dp instance {i}",
                ok,
                f"value {result.cost:.6f} dp {dp.cost:.6f} rel {rel:.2e} "
                f"delta {dp.refine_delta:.2e}",
            )
        )
    return checks


def suite_improvement(n: int = 50, seed: int = 13) -> list[Check]:
    rng = np.random.default_rng(seed)
    worst_cost = 0.0
    worst_theta = 0.0
    for _ in range(n):
        terms = random_terms(rng)
        bounds = random_bounds(rng, terms.horizon)
        strategy = random_strategy(rng, bounds)
        x = float(rng.uniform(0.3, 1.5)) * bounds.maximum.integral(
            0.0, terms.horizon, terms.loan_rate
        )
        before = cost(terms, x, strategy, bounds, Mode.SIMPLE)
        theta_before = simulate_simple(terms, x, strategy, bounds).theta
        improved = improve_interest_phase(terms, x, strategy, bounds)
        after = cost(terms, x, improved.strategy, bounds, Mode.SIMPLE)
        worst_cost = max(worst_cost, after.cost - before.cost)
        if improved.rule == "interest-reorder":
            theta_after = simulate_simple(terms, x, improved.strategy, bounds).theta
            worst_theta = max(worst_theta, abs(theta_after - theta_before))
    return [
        (
            "interest-phase reorder never increases cost",
            worst_cost <= 1e-9,
            f"worst increase {worst_cost:.3e}",
        ),
        (
            "interest-phase reorder preserves theta",
            worst_theta <= 1e-10,
            f"worst drift {worst_theta:.3e} years",
        ),
    ]


def suite_dominance(instances: int = 5, trials: int = 200, seed: int = 17) -> list[Check]:
    rng = np.random.default_rng(seed)
    worst = -math.inf
    for _ in range(instances):
        terms = random_terms(rng)
        bounds = random_bounds(rng, terms.horizon)
        th = thresholds(terms, bounds)
        x = float(rng.uniform(0.2, 2.5)) * th.x_star
        _, best = optimal_strategy_compound(terms, bounds, x)
        for _ in range(trials):
            challenger = random_strategy(rng, bounds)
            value = cost(terms, x, challenger, bounds, Mode.COMPOUND).cost
            worst = max(worst, best.cost - value)
    return [
        (
            "optimal plan never beaten by random strategies",
            worst <= 1e-8,
            f"worst margin {worst:.3e}",
        )
    ]


def figure1_defaults() -> tuple[LoanTerms, BorrowerProfile]:
    """Default scenario: a PLUS-rate loan under the usual income-driven caps."""
    terms = LoanTerms(r=0.03, beta=0.0754 - 0.03, omega=0.4, horizon=25.0)
    profile = BorrowerProfile(
        annual_income=82.0, subsistence=32.0, growth=0.04, f_min=0.10, f_max=0.30
    )
    return terms, profile


def suite_frontier_shape() -> list[Check]:
    from .sweeps import frontier_rows

    terms, profile = figure1_defaults()
    bounds = bounds_from_profile(profile, terms.horizon)
    th = thresholds(terms, bounds)
    rows = frontier_rows(terms, bounds, 5.0, 6.0 * th.x_upper, 60)
    limit = terms.omega * math.exp(terms.beta * terms.horizon)
    below = [r["cost_over_x"] for r in rows if r["x"] <= th.x_star]
    above = [r["cost_over_x"] for r in rows if r["x"] > th.x_star]
    increasing = all(b >= a - 1e-9 for a, b in zip(below, below[1:]))
    decreasing = all(b <= a + 1e-9 for a, b in zip(above, above[1:]))
    approaches = above[-1] > limit and (above[-1] - limit) < 0.25 * (above[0] - limit)
    return [
        ("cost/x increases up to the critical balance", increasing, f"{len(below)} pts"),
        ("cost/x decreases beyond the critical balance", decreasing, f"{len(above)} pts"),
        (
            "cost/x approaches the marginal cost from above",
            approaches,
            f"tail gap {above[-1] - limit:.4f}",
        ),
    ]


SUITES = {
    "marginal": suite_marginal,
    "comparison": suite_comparison,
    "theorem-vs-dp": suite_theorem_vs_dp,
    "improvement": suite_improvement,
    "dominance": suite_dominance,
    "frontier-shape": suite_frontier_shape,
}


def run_suite(name: str) -> list[Check]:
    if name == "all":
        out: list[Check] = []
        for suite in SUITES.values():
            out.extend(suite())
        return out
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    return SUITES[name]()
