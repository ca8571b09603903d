"""Scenario document parsing and canonical serialization.

Wire/file schema (version 1):

    {"version": 1, "population": 1000.0, "growth_rate": 0.1,
     "firms": [{"name": "a", "share": 0.6, "loyalty": 0.8,
                "leave_rate": 0.02}, ...]}

Unknown fields are rejected.  ``population`` is optional (defaults to
1.0; every relative quantity is scale-free).
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import InvalidScenario, ScenarioParseError
from .market import MarketScenario

_TOP_KEYS = {"version", "population", "growth_rate", "firms"}
_FIRM_KEYS = {"name", "share", "loyalty", "leave_rate"}


def round_sig(x: float, digits: int = 15) -> float:
    """Round to ``digits`` significant decimal digits."""
    if x == 0 or not isinstance(x, float):
        return x
    return float(f"{x:.{digits}g}")


def _number(doc: dict, key: str, default=None) -> float:
    if key not in doc:
        if default is None:
            raise ScenarioParseError(f"missing required field '{key}'", field=key)
        return default
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioParseError(f"field '{key}' must be a number", field=key)
    return float(value)


def parse_scenario_doc(doc) -> tuple[MarketScenario, list[str]]:
    """Validate a scenario document; returns (scenario, firm names)."""
    if not isinstance(doc, dict):
        raise ScenarioParseError("scenario document must be a JSON object")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        key = sorted(unknown)[0]
        raise ScenarioParseError(f"unknown field '{key}'", field=key)
    version = doc.get("version")
    if version != 1:
        raise ScenarioParseError(
            f"unsupported schema version {version!r}, expected 1", field="version"
        )
    firms = doc.get("firms")
    if not isinstance(firms, list) or not firms:
        raise ScenarioParseError(
            "field 'firms' must be a non-empty array", field="firms"
        )
    names, shares, loyalty, leave = [], [], [], []
    for i, firm in enumerate(firms):
        if not isinstance(firm, dict):
            raise ScenarioParseError(f"firms[{i}] must be an object", field="firms")
        unknown = set(firm) - _FIRM_KEYS
        if unknown:
            key = sorted(unknown)[0]
            raise ScenarioParseError(
                f"unknown field 'firms[{i}].{key}'", field=f"firms[{i}].{key}"
            )
        name = firm.get("name", f"firm_{i}")
        if not isinstance(name, str):
            raise ScenarioParseError(
                f"firms[{i}].name must be a string", field=f"firms[{i}].name"
            )
        names.append(name)
        shares.append(_number(firm, "share"))
        loyalty.append(_number(firm, "loyalty"))
        leave.append(_number(firm, "leave_rate"))
    try:
        scenario = MarketScenario(
            shares=shares,
            loyalty=loyalty,
            leave_rate=leave,
            growth_rate=_number(doc, "growth_rate"),
            population=_number(doc, "population", default=1.0),
        )
    except InvalidScenario:
        raise  # cross-field invariant violations keep their own type
    return scenario, names


def load_scenario(path: str | Path) -> tuple[MarketScenario, list[str]]:
    """Parse a scenario JSON file."""
    path = Path(path)
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(f"invalid JSON in {path}: {exc}") from exc
    return parse_scenario_doc(doc)


def scenario_to_doc(
    scenario: MarketScenario, names: list[str] | None = None
) -> dict:
    """Canonical document form; floats at 15 significant digits."""
    if names is None:
        names = [f"firm_{i}" for i in range(scenario.n)]
    return {
        "version": 1,
        "population": round_sig(float(scenario.population)),
        "growth_rate": round_sig(float(scenario.growth_rate)),
        "firms": [
            {
                "name": names[i],
                "share": round_sig(float(scenario.shares[i])),
                "loyalty": round_sig(float(scenario.loyalty[i])),
                "leave_rate": round_sig(float(scenario.leave_rate[i])),
            }
            for i in range(scenario.n)
        ],
    }


def canonical_json(doc: dict) -> str:
    """Deterministic serialization used by the file store."""
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
