"""Parameter sweeps over typical market environments.

Reproduces the numerical study grids: minimum-improvement bounds over
(growth, share, loyalty) and the friendliness index over
(growth, sensitive-set size, sensitive share, loyalty).  Output is
deterministic CSV with 12-significant-digit floats.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InvalidConfig, InvalidScenario
from .market import MarketScenario, compute_aggregates
from .stability import min_improvements

DEFAULT_DELTA = 0.05

QMIN_COLUMNS = ("theta", "ms", "r", "q_hat_min", "q_min")
KAPPA_COLUMNS = ("theta", "n_prime", "ms_sensitive", "r", "kappa", "kappa_check")


def _grid(start: float, stop: float, step: float) -> list[float]:
    count = int(round((stop - start) / step)) + 1
    return [round(start + k * step, 10) for k in range(count)]


@dataclass(frozen=True)
class SweepConfig:
    """Sweep grids; defaults match the mature/fast-growing study setup."""

    theta_values: tuple[float, ...] = (0.1, 0.5)
    r_grid: tuple[float, ...] = tuple(_grid(0.70, 0.95, 0.05))
    nu: float = 0.02
    ms_grid: tuple[float, ...] = tuple(_grid(0.2, 0.8, 0.1))
    n_prime_values: tuple[int, ...] = (1, 2, 3)
    delta: float = DEFAULT_DELTA

    def __post_init__(self):
        for name in ("theta_values", "r_grid", "ms_grid", "n_prime_values"):
            if not tuple(getattr(self, name)):
                raise InvalidConfig(f"{name} is empty")
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if not (-1.0 < self.delta < 1.0):
            raise InvalidConfig(f"delta={self.delta} outside (-1, 1)")
        if not (0.0 <= self.nu < 1.0):
            raise InvalidConfig(f"nu={self.nu} outside [0, 1)")
        for ms in self.ms_grid:
            if not (0.0 < ms < 1.0):
                raise InvalidConfig(f"ms={ms} outside (0, 1)")
        for r in self.r_grid:
            if not (0.0 <= r <= 1.0 - self.nu):
                raise InvalidConfig(f"r={r} incompatible with nu={self.nu}")


def _uniform_scenario(shares, r: float, nu: float, theta: float) -> MarketScenario:
    n = len(shares)
    try:
        return MarketScenario(
            shares=shares,
            loyalty=[r] * n,
            leave_rate=[nu] * n,
            growth_rate=theta,
        )
    except InvalidScenario as exc:
        raise InvalidConfig(f"grid point produces an invalid scenario: {exc}") from exc


def sweep_qmin(config: SweepConfig) -> list[dict]:
    """Minimum relative improvement for a firm of share ``ms``.

    Each grid point builds a two-firm market (the probed firm plus a
    residual firm holding the remaining share) with uniform loyalty and
    leave rates, and reports the probed firm's bound.
    """
    rows = []
    for theta in config.theta_values:
        for ms in config.ms_grid:
            for r in config.r_grid:
                scenario = _uniform_scenario([ms, 1.0 - ms], r, config.nu, theta)
                report = min_improvements(scenario, config.delta)
                rows.append(
                    {
                        "theta": theta,
                        "ms": ms,
                        "r": r,
                        "q_hat_min": float(report.q_hat_min[0]),
                        "q_min": float(report.q_min[0]),
                    }
                )
    return rows


def sweep_kappa(config: SweepConfig) -> list[dict]:
    """Friendliness over designated sensitive sets.

    ``n_prime`` firms split the sensitive share ``ms_sensitive``
    equally; one residual firm holds the rest.  Rows are emitted only
    for feasible grid points, where each designated firm's bound is
    strictly positive (equivalently ms_sensitive * f_o > n_prime *
    delta); kappa is the sensitive-set closed form

        kappa = 1 - (sum_{i in C'}(MS_i - r_hat_i) - n' * delta) / f_o

    and ``kappa_check`` re-derives it by summing the per-firm bounds.
    """
    rows = []
    for theta in config.theta_values:
        for n_prime in config.n_prime_values:
            for ms_o in config.ms_grid:
                for r in config.r_grid:
                    shares = [ms_o / n_prime] * n_prime + [1.0 - ms_o]
                    scenario = _uniform_scenario(shares, r, config.nu, theta)
                    agg = compute_aggregates(scenario)
                    report = min_improvements(scenario, config.delta)
                    q_hat = report.q_hat_min[:n_prime]
                    if not np.all(q_hat > 0.0):
                        continue  # designated firms not all sensitive
                    sensitive_shares = scenario.shares[:n_prime]
                    sensitive_rhat = agg.r_hat[:n_prime]
                    kappa = 1.0 - (
                        float((sensitive_shares - sensitive_rhat).sum())
                        - n_prime * config.delta
                    ) / agg.f_o
                    kappa_check = 1.0 - float(np.maximum(q_hat, 0.0).sum())
                    rows.append(
                        {
                            "theta": theta,
                            "n_prime": n_prime,
                            "ms_sensitive": ms_o,
                            "r": r,
                            "kappa": kappa,
                            "kappa_check": kappa_check,
                        }
                    )
    return rows


def _format_value(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    return f"{value:.12g}"


def rows_to_csv(rows: list[dict], columns: tuple[str, ...]) -> str:
    """Render rows as deterministic CSV (LF endings, 12 sig digits)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_format_value(row[c]) for c in columns])
    return buf.getvalue()


def write_csv(rows: list[dict], columns: tuple[str, ...], path: str | Path) -> None:
    Path(path).write_text(rows_to_csv(rows, columns))
