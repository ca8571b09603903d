import json

import pytest

from flmarket import InvalidScenario, ScenarioParseError
from flmarket.scenario_io import (
    canonical_json,
    load_scenario,
    parse_scenario_doc,
    round_sig,
    scenario_to_doc,
)

VALID_DOC = {
    "version": 1,
    "population": 1000.0,
    "growth_rate": 0.1,
    "firms": [
        {"name": "alpha", "share": 0.6, "loyalty": 0.8, "leave_rate": 0.02},
        {"name": "beta", "share": 0.4, "loyalty": 0.8, "leave_rate": 0.02},
    ],
}


def test_parse_valid_doc():
    scenario, names = parse_scenario_doc(VALID_DOC)
    assert names == ["alpha", "beta"]
    assert scenario.n == 2
    assert scenario.population == 1000.0
    assert scenario.growth_rate == 0.1


def test_population_defaults_to_one():
    doc = {k: v for k, v in VALID_DOC.items() if k != "population"}
    scenario, _ = parse_scenario_doc(doc)
    assert scenario.population == 1.0


def test_unknown_top_level_field_rejected():
    doc = dict(VALID_DOC, extra=1)
    with pytest.raises(ScenarioParseError) as exc:
        parse_scenario_doc(doc)
    assert exc.value.field == "extra"


def test_unknown_firm_field_rejected():
    doc = json.loads(json.dumps(VALID_DOC))
    doc["firms"][0]["color"] = "blue"
    with pytest.raises(ScenarioParseError) as exc:
        parse_scenario_doc(doc)
    assert "color" in str(exc.value)


def test_missing_field_named_in_error():
    doc = json.loads(json.dumps(VALID_DOC))
    del doc["firms"][1]["loyalty"]
    with pytest.raises(ScenarioParseError) as exc:
        parse_scenario_doc(doc)
    assert exc.value.field == "loyalty"


def test_wrong_version_rejected():
    with pytest.raises(ScenarioParseError):
        parse_scenario_doc(dict(VALID_DOC, version=2))


def test_cross_field_violation_keeps_invalid_scenario_type():
    doc = json.loads(json.dumps(VALID_DOC))
    doc["firms"][0]["share"] = 0.5  # shares now sum to 0.9
    with pytest.raises(InvalidScenario):
        parse_scenario_doc(doc)


def test_round_trip_through_doc():
    scenario, names = parse_scenario_doc(VALID_DOC)
    doc = scenario_to_doc(scenario, names)
    assert doc == VALID_DOC


def test_canonical_json_stable():
    scenario, names = parse_scenario_doc(VALID_DOC)
    doc = scenario_to_doc(scenario, names)
    assert canonical_json(doc) == canonical_json(json.loads(canonical_json(doc)))


def test_load_scenario_file(tmp_path):
    path = tmp_path / "market.json"
    path.write_text(json.dumps(VALID_DOC))
    scenario, names = load_scenario(path)
    assert scenario.n == 2

    with pytest.raises(FileNotFoundError):
        load_scenario(tmp_path / "missing.json")

    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ScenarioParseError):
        load_scenario(bad)


def test_round_sig():
    assert round_sig(0.12345678901234567) == 0.123456789012346
    assert round_sig(0.0) == 0.0
    assert round_sig(1.5) == 1.5
