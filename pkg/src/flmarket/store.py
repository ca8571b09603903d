"""File-backed named-scenario store.

One canonical JSON file per scenario plus an index file, all under a
single data directory.  Writes go to a temp file in the same directory
followed by an atomic rename, so a crash never leaves a torn record.
Updates use optimistic concurrency through a per-record version number.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
import threading
from datetime import datetime, timezone
from pathlib import Path

from .errors import FLMarketError
from .scenario_io import canonical_json, parse_scenario_doc

_NAME_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")


class UnknownScenario(FLMarketError):
    """No stored scenario has the requested name."""


class VersionConflict(FLMarketError):
    """The expected version does not match the stored record."""

    def __init__(self, message: str, current_version: int):
        super().__init__(message)
        self.current_version = current_version


class BadScenarioName(FLMarketError):
    """Scenario names are restricted to a filesystem-safe slug."""


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class ScenarioStore:
    """Directory-backed store keyed by scenario name.

    A single lock serializes writes; reads take it briefly too, which
    is plenty at desk scale.
    """

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.RLock()
        self._index_path = self.data_dir / "index.json"
        if not self._index_path.exists():
            self._write_atomic(self._index_path, canonical_json({}))

    def _record_path(self, name: str) -> Path:
        if not _NAME_RE.match(name) or name == "index":
            raise BadScenarioName(
                f"invalid scenario name {name!r}: use letters, digits, '.', '_', '-'"
            )
        return self.data_dir / f"{name}.json"

    @staticmethod
    def _write_atomic(path: Path, text: str) -> None:
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as handle:
                handle.write(text)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def _load_index(self) -> dict:
        return json.loads(self._index_path.read_text())

    def _save_index(self, index: dict) -> None:
        self._write_atomic(self._index_path, canonical_json(index))

    def list(self) -> list[dict]:
        with self._lock:
            index = self._load_index()
        return [
            {"name": name, **meta} for name, meta in sorted(index.items())
        ]

    def get(self, name: str) -> dict:
        path = self._record_path(name)
        with self._lock:
            if not path.exists():
                raise UnknownScenario(f"no scenario named {name!r}")
            record = json.loads(path.read_text())
        parse_scenario_doc(record["scenario"])  # stored documents re-validate
        return record

    def put(
        self, name: str, scenario_doc: dict, expected_version: int | None = None
    ) -> dict:
        """Upsert; returns the stored record.

        ``expected_version`` enables optimistic concurrency: the write
        is rejected unless it matches the current version (use 0 to
        insist the record is new).
        """
        parse_scenario_doc(scenario_doc)
        path = self._record_path(name)
        with self._lock:
            index = self._load_index()
            current = index.get(name)
            current_version = current["version"] if current else 0
            if expected_version is not None and expected_version != current_version:
                raise VersionConflict(
                    f"scenario {name!r} is at version {current_version}, "
                    f"expected {expected_version}",
                    current_version=current_version,
                )
            now = _now()
            record = {
                "name": name,
                "version": current_version + 1,
                "created_at": current["created_at"] if current else now,
                "updated_at": now,
                "scenario": scenario_doc,
            }
            self._write_atomic(path, canonical_json(record))
            index[name] = {
                "version": record["version"],
                "created_at": record["created_at"],
                "updated_at": record["updated_at"],
            }
            self._save_index(index)
        return record

    def delete(self, name: str) -> None:
        path = self._record_path(name)
        with self._lock:
            index = self._load_index()
            if name not in index:
                raise UnknownScenario(f"no scenario named {name!r}")
            del index[name]
            self._save_index(index)
            if path.exists():
                path.unlink()
