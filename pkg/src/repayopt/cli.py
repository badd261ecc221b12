"""Command-line interface: value, frontier, contour, verify, serve."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import __version__
from .compound import optimal_strategy_compound, thresholds
from .dynamics import cost
from .model import LoanModelError, LoanTerms, Mode
from .schedules import BorrowerProfile, bounds_from_profile
from .serialize import (
    Scenario,
    currency_str,
    parse_scenario,
    strategy_to_json,
    valuation_to_json,
)
from .simple import classify_regime, optimize_simple
from .sweeps import SweepAxis, SweepSpec, run_contour, run_frontier
from .verify import run_suite

_DEFAULTS = {
    "r": 0.03,
    "beta": 0.0454,  # PLUS rate 7.54% minus a 3% discount rate
    "omega": 0.4,
    "T": 25.0,
    "income": 82.0,
    "subsistence": 32.0,
    "growth": 0.04,
    "f_min": 0.10,
    "f_max": 0.30,
    "x": 100.0,
    "mode": "compound",
}


def _num(value: str) -> float:
    return float(value)


def _add_scenario_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON scenario document; flags override it")
    parser.add_argument("--x", type=_num, help="initial balance (thousands)")
    parser.add_argument("--r", type=_num, help="discount rate")
    parser.add_argument("--beta", type=_num, help="loan-rate spread over r")
    parser.add_argument("--omega", type=_num, help="tax rate on forgiven balance")
    parser.add_argument("--T", type=_num, dest="horizon", help="forgiveness horizon")
    parser.add_argument("--income", type=_num, help="annual income (thousands)")
    parser.add_argument("--subsistence", type=_num, help="subsistence level (thousands)")
    parser.add_argument("--growth", type=_num, help="income growth rate")
    parser.add_argument("--f-min", type=_num, dest="f_min", help="minimum payment fraction")
    parser.add_argument("--f-max", type=_num, dest="f_max", help="maximum payment fraction")
    parser.add_argument("--mode", choices=["compound", "simple"], help="interest accrual")


def _build_scenario(args: argparse.Namespace) -> Scenario:
    doc: dict = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            doc = json.load(fh)

    terms_doc = dict(doc.get("terms") or {})
    for key, flag in (("r", "r"), ("beta", "beta"), ("omega", "omega"), ("T", "horizon")):
        value = getattr(args, flag, None)
        if value is not None:
            terms_doc[key] = value
        terms_doc.setdefault(key, _DEFAULTS[key])
    doc["terms"] = terms_doc

    if "bounds" not in doc:
        profile_doc = dict(doc.get("profile") or {})
        for key in ("income", "subsistence", "growth", "f_min", "f_max"):
            value = getattr(args, key, None)
            if value is not None:
                profile_doc[key] = value
            profile_doc.setdefault(key, _DEFAULTS[key])
        doc["profile"] = profile_doc

    if getattr(args, "x", None) is not None:
        doc["x"] = args.x
    doc.setdefault("x", _DEFAULTS["x"])
    if getattr(args, "mode", None) is not None:
        doc["mode"] = args.mode
    doc.setdefault("mode", _DEFAULTS["mode"])
    return parse_scenario(doc)


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt(value: float) -> str:
    return f"{value:.12g}"


def _csv_text(comment: str, header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    buf.write(comment + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _evaluate(scenario: Scenario):
    """Valuation for a scenario: the supplied strategy, or the optimal one."""
    if scenario.strategy is not None:
        result = cost(
            scenario.terms, scenario.x, scenario.strategy, scenario.bounds, scenario.mode
        )
        strategy = scenario.strategy
    elif scenario.mode is Mode.COMPOUND:
        strategy, result = optimal_strategy_compound(
            scenario.terms, scenario.bounds, scenario.x
        )
    else:
        strategy, result = optimize_simple(scenario.terms, scenario.x, scenario.bounds)
    regime = classify_regime(scenario.terms, scenario.x, scenario.bounds)
    return strategy, result, regime


def cmd_value(args: argparse.Namespace) -> int:
    scenario = _build_scenario(args)
    strategy, result, regime = _evaluate(scenario)

    if args.format == "json":
        doc = valuation_to_json(result, regime=regime.tag.value, scenario=scenario)
        doc["mode"] = scenario.mode.value
        doc["x"] = scenario.x
        _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
        return 0

    th = thresholds(scenario.terms, scenario.bounds)
    lines = [
        f"balance             {currency_str(scenario.x)}",
        f"mode                {scenario.mode.value}",
        f"regime              {regime.tag.value}",
        f"strategy            {strategy.label()}"
        + ("  (heuristic)" if result.heuristic else ""),
        f"cost                {currency_str(result.cost)}",
        f"stop time           {result.tau:.6f} years"
        + ("  (forgiven)" if result.forgiven_balance > 0 else "  (paid off)"),
        f"forgiven balance    {currency_str(result.forgiven_balance)}",
        f"tax payment (pv)    {currency_str(result.tax_payment)}",
        f"critical balance    {currency_str(th.x_star)}",
        f"critical horizon    {th.t_c:.6f} years",
        "timeline:",
    ]
    start = 0.0
    for seg_doc in strategy_to_json(strategy)["segments"]:
        lines.append(f"  [{start:8.4f}, {seg_doc['end']:8.4f}]  {seg_doc['policy']}")
        start = seg_doc["end"]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_frontier(args: argparse.Namespace) -> int:
    scenario = _build_scenario(args)
    spec = SweepSpec(
        axes=(SweepAxis("x", args.x_lo, args.x_hi, args.steps),),
        fixed={"mode": scenario.mode.value},
        output=args.out,
        format=args.format,
    )
    rows = run_frontier(spec, scenario.terms, scenario.bounds)
    if args.format == "json":
        _emit(json.dumps({"rows": rows}, indent=2, sort_keys=True) + "\n", args.out)
    else:
        text = _csv_text(
            "# repayopt frontier v1; currency=thousands; time=years; rates=decimal",
            ["x", "cost", "cost_over_x", "strategy", "tau"],
            [
                [_fmt(r["x"]), _fmt(r["cost"]), _fmt(r["cost_over_x"]), r["strategy"], _fmt(r["tau"])]
                for r in rows
            ],
        )
        _emit(text, args.out)
    if args.fig:
        import math

        from .figures import render_frontier

        th = thresholds(scenario.terms, scenario.bounds)
        render_frontier(
            rows,
            args.fig,
            x_star=th.x_star,
            asymptote=scenario.terms.omega
            * math.exp(scenario.terms.beta * scenario.terms.horizon),
        )
    return 0


def cmd_contour(args: argparse.Namespace) -> int:
    scenario = _build_scenario(args)
    spec = SweepSpec(
        axes=(
            SweepAxis("beta", args.beta_lo, args.beta_hi, args.beta_steps),
            SweepAxis("r", args.r_lo, args.r_hi, args.r_steps),
        ),
        output=args.out,
        format=args.format,
    )
    betas, rs, grid = run_contour(spec, scenario.terms, scenario.bounds)
    if args.format == "json":
        _emit(
            json.dumps({"betas": betas, "rs": rs, "x_star": grid}, indent=2, sort_keys=True)
            + "\n",
            args.out,
        )
    else:
        rows = []
        for i, r in enumerate(rs):
            for j, beta in enumerate(betas):
                rows.append([_fmt(beta), _fmt(r), _fmt(grid[i][j])])
        text = _csv_text(
            "# repayopt contour v1; currency=thousands; rates=decimal",
            ["beta", "r", "x_star"],
            rows,
        )
        _emit(text, args.out)
    if args.fig:
        from .figures import render_contour

        render_contour(betas, rs, grid, args.fig)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    checks = run_suite(args.suite)
    failed = 0
    for name, passed, detail in checks:
        status = "PASS" if passed else "FAIL"
        print(f"[{status}] {name}: {detail}")
        if not passed:
            failed += 1
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return 0 if failed == 0 else 1


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .api import create_app

    uvicorn.run(create_app(), host=args.bind, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="repayopt",
        description="Repayment-cost optimizer for income-driven federal student loans",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_value = sub.add_parser("value", help="value a scenario and report the best plan")
    _add_scenario_flags(p_value)
    p_value.add_argument("--format", choices=["text", "json"], default="text")
    p_value.add_argument("--out", help="write the report to a file")
    p_value.set_defaults(func=cmd_value)

    p_front = sub.add_parser("frontier", help="sweep the balance axis")
    _add_scenario_flags(p_front)
    p_front.add_argument("--x-lo", type=_num, default=5.0)
    p_front.add_argument("--x-hi", type=_num, default=500.0)
    p_front.add_argument("--steps", type=int, default=100)
    p_front.add_argument("--format", choices=["csv", "json"], default="csv")
    p_front.add_argument("--out", help="write the table to a file")
    p_front.add_argument("--fig", help="render a figure alongside the table")
    p_front.set_defaults(func=cmd_frontier)

    p_cont = sub.add_parser("contour", help="critical balance over (beta, r)")
    _add_scenario_flags(p_cont)
    p_cont.add_argument("--beta-lo", type=_num, default=0.01)
    p_cont.add_argument("--beta-hi", type=_num, default=0.06)
    p_cont.add_argument("--beta-steps", type=int, default=11)
    p_cont.add_argument("--r-lo", type=_num, default=0.01)
    p_cont.add_argument("--r-hi", type=_num, default=0.06)
    p_cont.add_argument("--r-steps", type=int, default=11)
    p_cont.add_argument("--format", choices=["csv", "json"], default="csv")
    p_cont.add_argument("--out", help="write the table to a file")
    p_cont.add_argument("--fig", help="render a figure alongside the table")
    p_cont.set_defaults(func=cmd_contour)

    p_verify = sub.add_parser("verify", help="run a self-check suite")
    p_verify.add_argument(
        "suite",
        nargs="?",
        default="all",
        help="marginal | comparison | theorem-vs-dp | improvement | dominance "
        "| frontier-shape | all",
    )
    p_verify.set_defaults(func=cmd_verify)

    p_serve = sub.add_parser("serve", help="start the JSON service")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--bind", default="127.0.0.1")
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (LoanModelError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
