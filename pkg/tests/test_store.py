import threading

import pytest

from flmarket.errors import ScenarioParseError
from flmarket.store import (
    BadScenarioName,
    ScenarioStore,
    UnknownScenario,
    VersionConflict,
)

DOC = {
    "version": 1,
    "population": 100.0,
    "growth_rate": 0.1,
    "firms": [
        {"name": "a", "share": 0.6, "loyalty": 0.8, "leave_rate": 0.02},
        {"name": "b", "share": 0.4, "loyalty": 0.8, "leave_rate": 0.02},
    ],
}


@pytest.fixture
def store(tmp_path):
    return ScenarioStore(tmp_path / "data")


def test_put_get_round_trip(store):
    record = store.put("base", DOC)
    assert record["version"] == 1
    fetched = store.get("base")
    assert fetched == record
    assert fetched["scenario"] == DOC


def test_version_increments_per_update(store):
    store.put("base", DOC)
    record = store.put("base", DOC)
    assert record["version"] == 2
    assert record["created_at"] <= record["updated_at"]


def test_expected_version_conflict(store):
    store.put("base", DOC)
    with pytest.raises(VersionConflict) as exc:
        store.put("base", DOC, expected_version=5)
    assert exc.value.current_version == 1
    # matching version succeeds
    assert store.put("base", DOC, expected_version=1)["version"] == 2


def test_delete_then_get_raises(store):
    store.put("base", DOC)
    store.delete("base")
    with pytest.raises(UnknownScenario):
        store.get("base")
    with pytest.raises(UnknownScenario):
        store.delete("base")


def test_list_sorted_by_name(store):
    store.put("zeta", DOC)
    store.put("alpha", DOC)
    names = [r["name"] for r in store.list()]
    assert names == ["alpha", "zeta"]


def test_invalid_name_rejected(store):
    for name in ("../escape", ".hidden", "a/b", "", "index"):
        with pytest.raises(BadScenarioName):
            store.put(name, DOC)


def test_invalid_document_rejected(store):
    with pytest.raises(ScenarioParseError):
        store.put("bad", {"version": 1})


def test_records_survive_restart(tmp_path):
    first = ScenarioStore(tmp_path / "data")
    first.put("base", DOC)
    second = ScenarioStore(tmp_path / "data")
    assert second.get("base")["scenario"] == DOC
    assert [r["name"] for r in second.list()] == ["base"]


def test_concurrent_puts_serialize(store):
    workers = 16
    barrier = threading.Barrier(workers)
    results = []

    def writer():
        barrier.wait()
        record = store.put("shared", DOC)
        results.append(record["version"])

    threads = [threading.Thread(target=writer) for _ in range(workers)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    # every write got a distinct, consecutive version
    assert sorted(results) == list(range(1, workers + 1))
    assert store.get("shared")["version"] == workers


def test_concurrent_conditional_puts_one_winner(store):
    store.put("guarded", DOC)
    workers = 8
    barrier = threading.Barrier(workers)
    outcomes = []

    def writer():
        barrier.wait()
        try:
            store.put("guarded", DOC, expected_version=1)
            outcomes.append("won")
        except VersionConflict:
            outcomes.append("conflict")

    threads = [threading.Thread(target=writer) for _ in range(workers)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert outcomes.count("won") == 1
    assert outcomes.count("conflict") == workers - 1
