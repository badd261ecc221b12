"""Stateless JSON-over-HTTP facade for valuations, trajectories and sweeps.

Every endpoint is idempotent and executes pure library functions; there is
no persistence.  Malformed requests get 400 with field-level diagnostics,
out-of-domain inputs get 422, and oversized sweeps get 429.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import __version__
from .compound import optimal_strategy_compound
from .dynamics import cost, simulate_simple, trajectory_compound
from .model import DomainError, LoanModelError, LoanTerms, Mode
from .schedules import BorrowerProfile, bounds_from_profile
from .serialize import (
    parse_scenario,
    parse_strategy,
    strategy_to_json,
    trajectory_to_json,
    valuation_to_json,
)
from .simple import classify_regime, optimize_simple
from .sweeps import frontier_rows

MAX_SWEEP_EVALUATIONS = 1_000_000


class ValuationRequest(BaseModel):
    terms: dict[str, Any]
    profile: dict[str, Any] | None = None
    bounds: dict[str, Any] | None = None
    x: float
    mode: str = "compound"
    strategy: dict[str, Any] | None = None


class CompareRequest(ValuationRequest):
    strategies: list[dict[str, Any]]


def _scenario_from(request: ValuationRequest):
    doc = request.model_dump(exclude_none=True)
    doc.pop("strategies", None)
    scenario = parse_scenario(doc)
    if scenario.x <= 0.0:
        raise DomainError("balance must be positive")
    return scenario


def create_app() -> FastAPI:
    app = FastAPI(title="repayopt", version=__version__)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        fields = [
            {"field": ".".join(str(p) for p in err["loc"]), "message": err["msg"]}
            for err in exc.errors()
        ]
        return JSONResponse(status_code=400, content={"detail": fields})

    @app.exception_handler(DomainError)
    async def domain_handler(request: Request, exc: DomainError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.exception_handler(LoanModelError)
    async def model_handler(request: Request, exc: LoanModelError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.exception_handler(ValueError)
    async def value_handler(request: Request, exc: ValueError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.get("/v1/health")
    async def health():
        return {"status": "ok", "version": __version__}

    @app.post("/v1/valuation")
    async def valuation(request: ValuationRequest):
        scenario = _scenario_from(request)
        if scenario.strategy is not None:
            strategy = scenario.strategy
            result = cost(
                scenario.terms, scenario.x, strategy, scenario.bounds, scenario.mode
            )
        elif scenario.mode is Mode.COMPOUND:
            strategy, result = optimal_strategy_compound(
                scenario.terms, scenario.bounds, scenario.x
            )
        else:
            strategy, result = optimize_simple(
                scenario.terms, scenario.x, scenario.bounds
            )
        regime = classify_regime(scenario.terms, scenario.x, scenario.bounds)
        doc = valuation_to_json(result, regime=regime.tag.value, scenario=scenario)
        doc["mode"] = scenario.mode.value
        doc["x"] = scenario.x
        return doc

    @app.post("/v1/trajectory")
    async def trajectory(request: ValuationRequest):
        scenario = _scenario_from(request)
        if scenario.strategy is not None:
            strategy = scenario.strategy
        elif scenario.mode is Mode.COMPOUND:
            strategy, _ = optimal_strategy_compound(
                scenario.terms, scenario.bounds, scenario.x
            )
        else:
            strategy, _ = optimize_simple(scenario.terms, scenario.x, scenario.bounds)
        if scenario.mode is Mode.COMPOUND:
            traj = trajectory_compound(
                scenario.terms, scenario.x, strategy, scenario.bounds
            )
        else:
            traj = simulate_simple(scenario.terms, scenario.x, strategy, scenario.bounds)
        doc = trajectory_to_json(traj)
        doc["strategy"] = strategy_to_json(strategy)
        return doc

    @app.post("/v1/compare")
    async def compare(request: CompareRequest):
        scenario = _scenario_from(request)
        results = []
        for strategy_doc in request.strategies:
            strategy = parse_strategy(strategy_doc)
            result = cost(
                scenario.terms, scenario.x, strategy, scenario.bounds, scenario.mode
            )
            entry = valuation_to_json(result)
            entry["label"] = strategy_doc.get("label", strategy.label())
            results.append(entry)
        return {"results": results}

    @app.get("/v1/frontier")
    async def frontier(
        x_lo: float = Query(gt=0),
        x_hi: float = Query(gt=0),
        steps: int = Query(default=50, ge=2),
        r: float = 0.03,
        beta: float = 0.0454,
        omega: float = 0.4,
        T: float = 25.0,
        income: float = 82.0,
        subsistence: float = 32.0,
        growth: float = 0.04,
        f_min: float = 0.10,
        f_max: float = 0.30,
        mode: str = "compound",
    ):
        if steps > MAX_SWEEP_EVALUATIONS:
            return JSONResponse(
                status_code=429,
                content={"detail": f"sweep exceeds {MAX_SWEEP_EVALUATIONS} evaluations"},
            )
        terms = LoanTerms(r=r, beta=beta, omega=omega, horizon=T)
        profile = BorrowerProfile(
            annual_income=income,
            subsistence=subsistence,
            growth=growth,
            f_min=f_min,
            f_max=f_max,
        )
        bounds = bounds_from_profile(profile, terms.horizon)
        rows = frontier_rows(terms, bounds, x_lo, x_hi, steps, Mode(mode))
        return {"rows": rows}

    ui_dir = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    if ui_dir.is_dir():  # serve the what-if UI when its bundle is present
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
