"""HTTP service exposing the engine plus named-scenario persistence.

JSON over HTTP/1.1 under /api/v1.  Error bodies have the shape
{"error": code, "message": str, "field"?: str}.  Field-level schema
problems return 400; per-field-valid documents that break cross-field
invariants (e.g. shares not summing to 1) return 422.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict, Field

from . import game as game_mod
from . import stability
from .errors import (
    DegenerateMarket,
    DimensionMismatch,
    GridTooLarge,
    InvalidDelta,
    InvalidScenario,
    NotViable,
    ScenarioParseError,
    StrategyOutOfRange,
)
from .market import ImprovementProfile, compute_aggregates, compute_outcome
from .scenario_io import parse_scenario_doc, round_sig
from .store import (
    BadScenarioName,
    ScenarioStore,
    UnknownScenario,
    VersionConflict,
)

DEFAULT_DELTA = 0.05


class FirmModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    name: str = ""
    share: float
    loyalty: float
    leave_rate: float


class ScenarioModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    version: int
    population: float = 1.0
    growth_rate: float
    firms: list[FirmModel]

    def to_doc(self) -> dict:
        doc = self.model_dump()
        for i, firm in enumerate(doc["firms"]):
            if not firm["name"]:
                firm["name"] = f"firm_{i}"
        return doc


class OutcomeRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    scenario: ScenarioModel
    q: list[float]


class StabilityRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    scenario: ScenarioModel
    delta: float = DEFAULT_DELTA
    q: list[float] | None = None


class AllocateRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    scenario: ScenarioModel
    delta: float = DEFAULT_DELTA
    weights: list[float]


class CurveModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    scale: float
    decay: float
    floor: float = 0.0


class ExchangeModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    self_gain: float = 1.0
    peer_gain: float = 0.5


class GameVerifyRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    scenario: ScenarioModel
    dataset_sizes: list[float]
    curves: list[CurveModel]
    exchange: ExchangeModel = Field(default_factory=ExchangeModel)
    grid_points: int = 5


class ScenarioPutRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    scenario: ScenarioModel
    version: int | None = None


def _round_floats(obj):
    """Canonicalize response numbers to 15 significant digits."""
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return obj
        return round_sig(obj)
    if isinstance(obj, np.ndarray):
        return [_round_floats(float(v)) for v in obj]
    if isinstance(obj, (np.floating,)):
        return _round_floats(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _error(status: int, code: str, message: str, field: str | None = None):
    body = {"error": code, "message": message}
    if field:
        body["field"] = field
    return JSONResponse(status_code=status, content=body)


def _outcome_doc(outcome) -> dict:
    return {
        "new_population": outcome.new_population,
        "new_shares": outcome.new_shares,
        "variances": outcome.variances,
        "flow_breakdown": [
            {
                "loyal": outcome.flow_loyal[i],
                "free_joining": outcome.flow_free[i],
                "new_joining": outcome.flow_new[i],
            }
            for i in range(outcome.new_shares.size)
        ],
    }


def create_app(
    data_dir: str | Path | None = None,
    cors_origin: str | None = None,
    static_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="flmarket scenario service")
    store = ScenarioStore(data_dir) if data_dir is not None else None

    if cors_origin:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=[cors_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        first = exc.errors()[0]
        loc = ".".join(str(p) for p in first.get("loc", []) if p != "body")
        return _error(400, "validation_error", first.get("msg", "invalid body"), loc or None)

    @app.exception_handler(InvalidScenario)
    async def invalid_scenario_handler(request: Request, exc: InvalidScenario):
        return _error(422, "invalid_scenario", str(exc), exc.field)

    @app.exception_handler(ScenarioParseError)
    async def parse_error_handler(request: Request, exc: ScenarioParseError):
        return _error(400, "parse_error", str(exc), exc.field)

    @app.exception_handler(DimensionMismatch)
    async def dimension_handler(request: Request, exc: DimensionMismatch):
        return _error(422, "dimension_mismatch", str(exc))

    @app.exception_handler(InvalidDelta)
    async def delta_handler(request: Request, exc: InvalidDelta):
        return _error(400, "invalid_delta", str(exc), "delta")

    @app.exception_handler(NotViable)
    async def not_viable_handler(request: Request, exc: NotViable):
        return _error(422, "not_viable", str(exc))

    @app.exception_handler(StrategyOutOfRange)
    async def strategy_handler(request: Request, exc: StrategyOutOfRange):
        return _error(422, "strategy_out_of_range", str(exc))

    @app.exception_handler(GridTooLarge)
    async def grid_handler(request: Request, exc: GridTooLarge):
        return _error(422, "grid_too_large", str(exc))

    @app.exception_handler(UnknownScenario)
    async def unknown_handler(request: Request, exc: UnknownScenario):
        return _error(404, "unknown_scenario", str(exc))

    @app.exception_handler(VersionConflict)
    async def conflict_handler(request: Request, exc: VersionConflict):
        resp = _error(409, "version_conflict", str(exc))
        return resp

    @app.exception_handler(BadScenarioName)
    async def bad_name_handler(request: Request, exc: BadScenarioName):
        return _error(400, "bad_name", str(exc), "name")

    @app.post("/api/v1/outcome")
    async def outcome_endpoint(body: OutcomeRequest):
        scenario, _ = parse_scenario_doc(body.scenario.to_doc())
        profile = ImprovementProfile.from_relative(body.q)
        outcome = compute_outcome(scenario, profile)
        return _round_floats(_outcome_doc(outcome))

    @app.post("/api/v1/stability")
    async def stability_endpoint(body: StabilityRequest):
        scenario, _ = parse_scenario_doc(body.scenario.to_doc())
        report = stability.full_report(scenario, body.delta)
        agg = compute_aggregates(scenario)
        doc: dict = {
            "delta": body.delta,
            "status": "frozen_market" if report.frozen else "ok",
            "aggregates": {
                "v_o": agg.v_o,
                "e": agg.e,
                "f_o": agg.f_o,
                "r_hat": agg.r_hat,
            },
        }
        if report.frozen:
            doc["statuses"] = list(report.statuses)
        else:
            doc.update(
                {
                    "q_hat_min": report.q_hat_min,
                    "q_min": report.q_min,
                    "sensitive_set": list(report.sensitive_set),
                    "kappa": report.kappa,
                    "viable": report.viable,
                }
            )
        if body.q is not None:
            profile = ImprovementProfile.from_relative(body.q)
            outcome = compute_outcome(scenario, profile)
            doc["outcome"] = _outcome_doc(outcome)
            doc["stable"] = stability.is_delta_stable(scenario, profile, body.delta)
        return _round_floats(doc)

    @app.post("/api/v1/allocate")
    async def allocate_endpoint(body: AllocateRequest):
        scenario, _ = parse_scenario_doc(body.scenario.to_doc())
        profile = stability.allocate(scenario, body.delta, body.weights)
        return _round_floats({"q": profile.q, "delta": body.delta})

    @app.post("/api/v1/game/verify")
    async def game_verify_endpoint(body: GameVerifyRequest):
        scenario, _ = parse_scenario_doc(body.scenario.to_doc())
        spec = game_mod.GameSpec(
            scenario=scenario,
            dataset_sizes=body.dataset_sizes,
            curves=tuple(
                game_mod.LossCurve(c.scale, c.decay, c.floor) for c in body.curves
            ),
            exchange=game_mod.ExchangeScheme(
                body.exchange.self_gain, body.exchange.peer_gain
            ),
            grid_points=body.grid_points,
        )
        result = game_mod.verify_dominant_strategy(spec)
        doc: dict = {"holds": result.holds}
        if result.counterexample is not None:
            firm, x_prime, x_others = result.counterexample
            doc["counterexample"] = {
                "firm": firm,
                "better_strategy": x_prime,
                "others": list(x_others),
            }
        return _round_floats(doc)

    def _require_store() -> ScenarioStore:
        if store is None:
            raise UnknownScenario("scenario persistence is not configured")
        return store

    @app.get("/api/v1/scenarios")
    async def list_scenarios():
        return {"scenarios": _require_store().list()}

    @app.get("/api/v1/scenarios/{name}")
    async def get_scenario(name: str):
        return _require_store().get(name)

    @app.put("/api/v1/scenarios/{name}")
    async def put_scenario(name: str, body: ScenarioPutRequest):
        record = _require_store().put(
            name, body.scenario.to_doc(), expected_version=body.version
        )
        return record

    @app.delete("/api/v1/scenarios/{name}")
    async def delete_scenario(name: str):
        _require_store().delete(name)
        return JSONResponse(status_code=204, content=None)

    if static_dir is not None and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
