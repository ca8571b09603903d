"""Command-line front end.

Subcommands: analyze, sweep-qmin, sweep-kappa, game-verify, serve.
``analyze`` exits 0 when the scenario is viable (and stable, if a q
vector is given), 2 when not, and 1 on any input error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import stability
from .errors import FLMarketError, ScenarioParseError
from .game import ExchangeScheme, GameSpec, LossCurve, verify_dominant_strategy
from .market import ImprovementProfile, compute_aggregates, compute_outcome
from .scenario_io import load_scenario, parse_scenario_doc
from .sweep import (
    KAPPA_COLUMNS,
    QMIN_COLUMNS,
    SweepConfig,
    rows_to_csv,
    sweep_kappa,
    sweep_qmin,
)

DEFAULT_DELTA = 0.05


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _parse_q(q: str | None, n: int):
    if q is None:
        return None
    try:
        values = [float(v) for v in q.split(",")]
    except ValueError:
        _fail(f"cannot parse q vector {q!r}")
    if len(values) != n:
        _fail(f"q has {len(values)} entries, scenario has {n} firms")
    return values


@click.group()
def main():
    """Market-share decision support for federated learning."""


@main.command()
@click.option("--scenario", "scenario_file", required=True, type=click.Path())
@click.option("--delta", default=DEFAULT_DELTA, show_default=True, type=float)
@click.option("--q", default=None, help="Comma-separated relative improvements.")
@click.option(
    "--format", "fmt", default="text", type=click.Choice(["text", "json"]),
    show_default=True,
)
def analyze(scenario_file, delta, q, fmt):
    """Report aggregates, stability bounds, friendliness and viability."""
    try:
        scenario, names = load_scenario(scenario_file)
    except FileNotFoundError:
        _fail(f"scenario file not found: {scenario_file}")
    except ScenarioParseError as exc:
        field = f" (field {exc.field})" if exc.field else ""
        _fail(f"cannot parse scenario: {exc}{field}")
    except FLMarketError as exc:
        _fail(f"invalid scenario: {exc}")

    try:
        q_values = _parse_q(q, scenario.n)
        agg = compute_aggregates(scenario)
        report = stability.full_report(scenario, delta)
        doc = {
            "delta": delta,
            "aggregates": {
                "v_o": agg.v_o,
                "e": agg.e,
                "f_o": agg.f_o,
                "r_hat": list(agg.r_hat),
            },
        }
        ok = True
        if report.frozen:
            doc["status"] = "frozen_market"
            doc["statuses"] = list(report.statuses)
            ok = all(s == "unconstrained" for s in report.statuses)
        else:
            doc["status"] = "ok"
            doc["q_hat_min"] = list(report.q_hat_min)
            doc["q_min"] = list(report.q_min)
            doc["sensitive_set"] = list(report.sensitive_set)
            doc["kappa"] = report.kappa
            doc["viable"] = report.viable
            ok = report.viable
        if q_values is not None:
            profile = ImprovementProfile.from_relative(q_values)
            outcome = compute_outcome(scenario, profile)
            stable = stability.is_delta_stable(scenario, profile, delta)
            doc["new_shares"] = list(outcome.new_shares)
            doc["variances"] = list(outcome.variances)
            doc["stable"] = stable
            ok = ok and stable
    except FLMarketError as exc:
        _fail(str(exc))

    if fmt == "json":
        click.echo(json.dumps(doc, indent=2))
    else:
        click.echo(f"firms: {', '.join(names)}")
        click.echo(f"delta: {delta}")
        a = doc["aggregates"]
        click.echo(
            f"aggregates: v_o={a['v_o']:.6g} e={a['e']:.6g} f_o={a['f_o']:.6g}"
        )
        click.echo("r_hat: " + ", ".join(f"{v:.6g}" for v in a["r_hat"]))
        if doc["status"] == "frozen_market":
            click.echo("frozen market (no vacillating customers)")
            click.echo("per-firm status: " + ", ".join(doc["statuses"]))
        else:
            click.echo(
                "q_hat_min: " + ", ".join(f"{v:.6g}" for v in doc["q_hat_min"])
            )
            click.echo("q_min: " + ", ".join(f"{v:.6g}" for v in doc["q_min"]))
            click.echo(f"sensitive firms: {doc['sensitive_set'] or 'none'}")
            click.echo(f"kappa: {doc['kappa']:.6g}")
            click.echo(f"viable: {doc['viable']}")
        if "stable" in doc:
            click.echo(
                "new_shares: " + ", ".join(f"{v:.6g}" for v in doc["new_shares"])
            )
            click.echo(
                "variances: " + ", ".join(f"{v:.6g}" for v in doc["variances"])
            )
            click.echo(f"stable: {doc['stable']}")
    sys.exit(0 if ok else 2)


def _emit_sweep(rows, columns, fmt, out, filename):
    if out is not None:
        out_dir = Path(out)
        out_dir.mkdir(parents=True, exist_ok=True)
        if fmt == "csv":
            path = out_dir / f"{filename}.csv"
            path.write_text(rows_to_csv(rows, columns))
        else:
            path = out_dir / f"{filename}.json"
            path.write_text(json.dumps(rows, indent=2) + "\n")
        click.echo(f"wrote {path}")
    else:
        if fmt == "csv":
            click.echo(rows_to_csv(rows, columns), nl=False)
        else:
            click.echo(json.dumps(rows, indent=2))


@main.command("sweep-qmin")
@click.option("--delta", default=DEFAULT_DELTA, show_default=True, type=float)
@click.option("--out", default=None, type=click.Path())
@click.option(
    "--format", "fmt", default="csv", type=click.Choice(["csv", "json"]),
    show_default=True,
)
def sweep_qmin_cmd(delta, out, fmt):
    """Sweep minimum-improvement bounds over the default market grids."""
    try:
        config = SweepConfig(delta=delta)
        rows = sweep_qmin(config)
    except FLMarketError as exc:
        _fail(str(exc))
    _emit_sweep(rows, QMIN_COLUMNS, fmt, out, "sweep_qmin")


@main.command("sweep-kappa")
@click.option("--delta", default=DEFAULT_DELTA, show_default=True, type=float)
@click.option("--out", default=None, type=click.Path())
@click.option(
    "--format", "fmt", default="csv", type=click.Choice(["csv", "json"]),
    show_default=True,
)
def sweep_kappa_cmd(delta, out, fmt):
    """Sweep the friendliness index over the default market grids."""
    try:
        config = SweepConfig(delta=delta)
        rows = sweep_kappa(config)
    except FLMarketError as exc:
        _fail(str(exc))
    _emit_sweep(rows, KAPPA_COLUMNS, fmt, out, "sweep_kappa")


@main.command("game-verify")
@click.option("--game", "game_file", required=True, type=click.Path())
def game_verify_cmd(game_file):
    """Brute-force check of the full-commitment dominant strategy."""
    try:
        text = Path(game_file).read_text()
    except FileNotFoundError:
        _fail(f"game file not found: {game_file}")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        _fail(f"invalid JSON in {game_file}: {exc}")
    try:
        scenario, _ = parse_scenario_doc(doc["scenario"])
        spec = GameSpec(
            scenario=scenario,
            dataset_sizes=doc["dataset_sizes"],
            curves=tuple(
                LossCurve(c["scale"], c["decay"], c.get("floor", 0.0))
                for c in doc["curves"]
            ),
            exchange=ExchangeScheme(**doc.get("exchange", {})),
            grid_points=doc.get("grid_points", 5),
        )
        result = verify_dominant_strategy(spec)
    except (KeyError, TypeError) as exc:
        _fail(f"malformed game spec: {exc}")
    except FLMarketError as exc:
        _fail(str(exc))
    if result.holds:
        click.echo("dominant strategy holds: full commitment is optimal")
        sys.exit(0)
    firm, better, others = result.counterexample
    click.echo(
        f"counterexample: firm {firm} prefers x={better} against others={others}"
    )
    sys.exit(2)


@main.command()
@click.option("--port", default=8080, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--data-dir", default="./scenarios", show_default=True, type=click.Path())
@click.option("--cors-origin", default=None)
@click.option("--static-dir", default=None, type=click.Path())
def serve(port, host, data_dir, cors_origin, static_dir):
    """Run the HTTP scenario service."""
    import uvicorn

    from .service import create_app

    app = create_app(
        data_dir=data_dir, cors_origin=cors_origin, static_dir=static_dir
    )
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
