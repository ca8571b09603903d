"""Delta-stability analysis: per-firm improvement bounds, the market
friendliness index kappa, the viability verdict, and feasible
improvement allocations.

A market is delta-stable when no firm loses more than ``delta`` of
market share.  For every firm there is a tight lower bound on its
relative improvement,

    q_hat_min_i = ((MS_i - delta) - r_hat_i) / f_o,

and stability holds iff q_i >= max(q_hat_min_i, 0) for all firms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMarket, InvalidDelta, InvalidScenario, NotViable
from .market import (
    ImprovementProfile,
    MarketScenario,
    _as_vector,
    compute_aggregates,
    compute_outcome,
)

# Per-firm status when f_o = 0 and the bound formula degenerates.
UNCONSTRAINED = "unconstrained"
INFEASIBLE = "infeasible"

_KAPPA_SLACK = 1e-12


def _check_delta(delta: float) -> None:
    if not (-1.0 < delta < 1.0):
        raise InvalidDelta(f"delta={delta} outside (-1, 1)")


@dataclass(frozen=True)
class StabilityReport:
    """Stability bounds and verdicts for one scenario and threshold.

    When the market is frozen (f_o = 0) the real-valued bounds are
    unavailable: ``statuses`` carries a per-firm "unconstrained" or
    "infeasible" marker instead, and kappa/viable are None.
    """

    delta: float
    frozen: bool
    q_hat_min: np.ndarray | None
    q_min: np.ndarray | None
    statuses: tuple[str, ...] | None
    sensitive_set: tuple[int, ...]
    kappa: float | None = None
    viable: bool | None = None


def is_delta_stable(
    scenario: MarketScenario, profile: ImprovementProfile, delta: float
) -> bool:
    """Direct stability check: every firm's share loss is <= delta.

    Evaluates the market outcome itself, independently of the bound
    formulas.
    """
    _check_delta(delta)
    outcome = compute_outcome(scenario, profile)
    return bool(np.all(outcome.variances <= delta))


def min_improvements(scenario: MarketScenario, delta: float) -> StabilityReport:
    """Tight per-firm lower bounds on relative improvement.

    Returns the raw bounds q_hat_min (possibly negative), their clamped
    versions q_min = max(q_hat_min, 0), and the set of sensitive firms
    (those with a strictly positive raw bound).
    """
    _check_delta(delta)
    agg = compute_aggregates(scenario)
    ms = scenario.shares
    if agg.f_o == 0.0:
        # Shares are frozen at r_hat; a firm is fine iff its target is
        # already met, and no improvement can change that.
        statuses = tuple(
            UNCONSTRAINED if ms[i] - delta <= agg.r_hat[i] + _KAPPA_SLACK else INFEASIBLE
            for i in range(scenario.n)
        )
        return StabilityReport(
            delta=delta,
            frozen=True,
            q_hat_min=None,
            q_min=None,
            statuses=statuses,
            sensitive_set=(),
        )
    q_hat = ((ms - delta) - agg.r_hat) / agg.f_o
    q_min = np.maximum(q_hat, 0.0)
    sensitive = tuple(int(i) for i in np.flatnonzero(q_hat > 0.0))
    return StabilityReport(
        delta=delta,
        frozen=False,
        q_hat_min=q_hat,
        q_min=q_min,
        statuses=None,
        sensitive_set=sensitive,
    )


def friendliness(scenario: MarketScenario, delta: float) -> float:
    """Friendliness index kappa = 1 - sum of clamped minimum bounds.

    Measures the surplus of relative improvement left to distribute
    after every firm's minimum is met; kappa >= 0 iff some feasible
    allocation keeps the market delta-stable.
    """
    report = min_improvements(scenario, delta)
    if report.frozen:
        raise DegenerateMarket(
            "no vacillating customers (f_o = 0); friendliness is undefined"
        )
    kappa = 1.0 - float(report.q_min.sum())
    # kappa > 1 would require a negative clamped bound; impossible.
    assert kappa <= 1.0 + _KAPPA_SLACK, f"kappa={kappa} exceeds 1"
    return kappa


def viability(scenario: MarketScenario, delta: float) -> bool:
    """Whether any feasible improvement allocation is delta-stable.

    Uses the sensitive-set closed form: with C' the sensitive firms,
    viable iff (sum_{i in C'}(MS_i - r_hat_i) - f_o) / |C'| <= delta.
    Equivalent to kappa >= 0.
    """
    report = min_improvements(scenario, delta)
    if report.frozen:
        raise DegenerateMarket(
            "no vacillating customers (f_o = 0); viability is undefined"
        )
    if not report.sensitive_set:
        return True
    agg = compute_aggregates(scenario)
    idx = list(report.sensitive_set)
    lhs = (
        float((scenario.shares[idx] - agg.r_hat[idx]).sum()) - agg.f_o
    ) / len(idx)
    return lhs <= delta


def allocate(
    scenario: MarketScenario, delta: float, weights
) -> ImprovementProfile:
    """Split the friendliness surplus across firms.

    Each firm receives its minimum bound plus ``weights_i * kappa``;
    the result sums to 1 and any profile with these relative
    improvements keeps the market delta-stable.
    """
    weights = _as_vector(weights, "weights")
    if weights.size != scenario.n:
        raise InvalidScenario(
            f"weights has {weights.size} entries, scenario has {scenario.n} firms",
            field="weights",
        )
    if np.any(weights < 0.0) or abs(float(weights.sum()) - 1.0) > 1e-9:
        raise InvalidScenario(
            "weights must be non-negative and sum to 1", field="weights"
        )
    kappa = friendliness(scenario, delta)  # raises DegenerateMarket if frozen
    if kappa < -_KAPPA_SLACK:
        raise NotViable(f"kappa={kappa} < 0; no feasible allocation exists")
    kappa = max(kappa, 0.0)  # rounding noise at the kappa = 0 boundary
    report = min_improvements(scenario, delta)
    q = report.q_min + weights * kappa
    return ImprovementProfile.from_relative(q)


def full_report(scenario: MarketScenario, delta: float) -> StabilityReport:
    """Bounds plus the kappa and viability verdicts in one report."""
    report = min_improvements(scenario, delta)
    if report.frozen:
        return report
    kappa = 1.0 - float(report.q_min.sum())
    return StabilityReport(
        delta=report.delta,
        frozen=False,
        q_hat_min=report.q_hat_min,
        q_min=report.q_min,
        statuses=None,
        sensitive_set=report.sensitive_set,
        kappa=kappa,
        viable=kappa >= 0.0,
    )
