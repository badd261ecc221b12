"""JSON schemas shared by the CLI and the HTTP service.

One scenario document drives both entry points so that a config exported
from the UI evaluates identically everywhere.  Currency amounts carry a
fixed-precision decimal string alongside the raw double for drift-free
display.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .compound import thresholds
from .model import (
    ConstantRate,
    LoanTerms,
    MaxRate,
    MinRate,
    Mode,
    PaymentBounds,
    Policy,
    Segment,
    StopKind,
    Strategy,
    TabulatedRate,
    Trajectory,
    ValuationResult,
)
from .schedules import BorrowerProfile, bounds_from_profile

SCHEMA_VERSION = "1"


def currency_str(value: float) -> str:
    """Fixed-precision decimal rendering used by every outward interface."""
    return f"{value:.6f}"


def parse_terms(data: dict[str, Any]) -> LoanTerms:
    try:
        return LoanTerms(
            r=float(data["r"]),
            beta=float(data["beta"]),
            omega=float(data["omega"]),
            horizon=float(data["T"]),
        )
    except KeyError as exc:
        raise ValueError(f"terms: missing field {exc.args[0]!r}") from None


def terms_to_json(terms: LoanTerms) -> dict[str, float]:
    return {"r": terms.r, "beta": terms.beta, "omega": terms.omega, "T": terms.horizon}


def parse_profile(data: dict[str, Any]) -> BorrowerProfile:
    try:
        return BorrowerProfile(
            annual_income=float(data["income"]),
            subsistence=float(data["subsistence"]),
            growth=float(data["growth"]),
            f_min=float(data["f_min"]),
            f_max=float(data["f_max"]),
        )
    except KeyError as exc:
        raise ValueError(f"profile: missing field {exc.args[0]!r}") from None


def profile_to_json(profile: BorrowerProfile) -> dict[str, float]:
    return {
        "income": profile.annual_income,
        "subsistence": profile.subsistence,
        "growth": profile.growth,
        "f_min": profile.f_min,
        "f_max": profile.f_max,
    }


def parse_policy(data: Any) -> Policy:
    if data == "min":
        return MinRate()
    if data == "max":
        return MaxRate()
    if isinstance(data, dict):
        if "constant" in data:
            return ConstantRate(level=float(data["constant"]))
        if "tabulated" in data:
            tab = data["tabulated"]
            return TabulatedRate(
                times=tuple(float(t) for t in tab["times"]),
                levels=tuple(float(v) for v in tab["levels"]),
            )
    raise ValueError(f"unknown policy {data!r}")


def policy_to_json(policy: Policy) -> Any:
    if isinstance(policy, MinRate):
        return "min"
    if isinstance(policy, MaxRate):
        return "max"
    if isinstance(policy, ConstantRate):
        return {"constant": float(policy.level)}
    if isinstance(policy, TabulatedRate):
        return {
            "tabulated": {
                "times": [float(t) for t in policy.times],
                "levels": [float(v) for v in policy.levels],
            }
        }
    raise TypeError(f"unknown policy {policy!r}")


def parse_strategy(data: dict[str, Any]) -> Strategy:
    segments = tuple(
        Segment(end=float(seg["end"]), policy=parse_policy(seg["policy"]))
        for seg in data["segments"]
    )
    return Strategy(segments)


def strategy_to_json(strategy: Strategy) -> dict[str, Any]:
    return {
        "label": strategy.label(),
        "segments": [
            {"end": float(seg.end), "policy": policy_to_json(seg.policy)}
            for seg in strategy.segments
        ],
    }


@dataclass(frozen=True)
class Scenario:
    """A fully specified valuation question."""

    terms: LoanTerms
    bounds: PaymentBounds
    x: float
    mode: Mode
    strategy: Strategy | None = None
    profile: BorrowerProfile | None = None

    def to_json(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "terms": terms_to_json(self.terms),
            "x": self.x,
            "mode": self.mode.value,
        }
        if self.profile is not None:
            doc["profile"] = profile_to_json(self.profile)
        else:
            doc["bounds"] = {
                "times": [p.end for p in self.bounds.minimum.pieces],
                "min": [p.rate.coef for p in self.bounds.minimum.pieces],
                "max": [p.rate.coef for p in self.bounds.maximum.pieces],
            }
        if self.strategy is not None:
            doc["strategy"] = strategy_to_json(self.strategy)
        return doc


def parse_scenario(data: dict[str, Any]) -> Scenario:
    terms = parse_terms(data.get("terms") or {})
    profile = None
    if "profile" in data:
        profile = parse_profile(data["profile"])
        bounds = bounds_from_profile(profile, terms.horizon)
    elif "bounds" in data:
        tab = data["bounds"]
        bounds = PaymentBounds.tabulated(
            times=[float(t) for t in tab["times"]],
            min_levels=[float(v) for v in tab["min"]],
            max_levels=[float(v) for v in tab["max"]],
        )
        if abs(bounds.horizon - terms.horizon) > 1e-9:
            raise ValueError("tabulated bounds must cover exactly [0, T]")
    else:
        raise ValueError("scenario needs either a profile or tabulated bounds")
    mode = Mode(data.get("mode", "compound"))
    x = float(data.get("x", 0.0))
    strategy = parse_strategy(data["strategy"]) if "strategy" in data else None
    return Scenario(
        terms=terms, bounds=bounds, x=x, mode=mode, strategy=strategy, profile=profile
    )


def valuation_to_json(
    result: ValuationResult,
    *,
    regime: str | None = None,
    scenario: Scenario | None = None,
) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "cost": float(result.cost),
        "cost_str": currency_str(result.cost),
        "tau": float(result.tau),
        "paid_off": bool(result.forgiven_balance <= 0.0),
        "forgiven_balance": float(result.forgiven_balance),
        "forgiven_balance_str": currency_str(result.forgiven_balance),
        "tax_payment": float(result.tax_payment),
        "tax_payment_str": currency_str(result.tax_payment),
        "strategy": strategy_to_json(result.strategy),
        "heuristic": bool(result.heuristic),
    }
    if regime is not None:
        doc["regime"] = regime
    if scenario is not None:
        th = thresholds(scenario.terms, scenario.bounds)
        doc["thresholds"] = {
            "x_star": float(th.x_star),
            "t_c": float(th.t_c),
            "t_star": float(th.t_star),
            "x_lower": float(th.x_lower),
            "x_upper": float(th.x_upper),
        }
    return doc


def trajectory_to_json(trajectory: Trajectory) -> dict[str, Any]:
    return {
        "samples": [
            {
                "t": float(s.t),
                "balance": float(s.balance),
                "principal": float(s.principal),
                "rate": float(s.rate),
                "discounted_paid": float(s.discounted_paid),
            }
            for s in trajectory.samples
        ],
        "tau": float(trajectory.stop_time),
        "stop_kind": trajectory.stop_kind.value,
        "theta": float(trajectory.theta),
        "final_balance": float(trajectory.final_balance),
        "paid_off": trajectory.stop_kind is StopKind.PAID_OFF,
    }
