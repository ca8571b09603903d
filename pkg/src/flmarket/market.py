"""Competitive-market model: pre/post collaboration market shares.

The market consists of ``n`` firms serving disjoint customer groups.
After a round of collaborative model training each firm's customers
split into loyal, leaving, and free ("vacillating") groups; free
customers and new entrants redistribute in proportion to each firm's
relative service-quality improvement.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, IndexOutOfRange, InvalidScenario

# User-supplied vectors are validated at this tolerance; internal
# algebraic identities hold to ~1e-12.
INPUT_TOL = 1e-9


def _as_vector(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidScenario(f"{name} must be a non-empty 1-D vector", field=name)
    if not np.all(np.isfinite(arr)):
        idx = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise InvalidScenario(f"{name}[{idx}] is not finite", field=name, index=idx)
    return arr


@dataclass(frozen=True)
class MarketScenario:
    """The pre-collaboration market.

    shares:      original market shares, each in (0, 1], summing to 1
    loyalty:     per-firm proportion of customers loyal to the firm
    leave_rate:  per-firm proportion of customers exiting the market
    growth_rate: new customers entering, as a fraction of the population
    population:  original market size in customers (counts are
                 real-valued; only flow breakdowns need it)
    alpha:       service-quality gain per unit of loss reduction; it
                 cancels in every relative quantity and is kept only as
                 metadata
    """

    shares: np.ndarray
    loyalty: np.ndarray
    leave_rate: np.ndarray
    growth_rate: float = 0.0
    population: float = 1.0
    alpha: float = 1.0

    def __post_init__(self):
        shares = _as_vector(self.shares, "shares")
        loyalty = _as_vector(self.loyalty, "loyalty")
        leave = _as_vector(self.leave_rate, "leave_rate")
        object.__setattr__(self, "shares", shares)
        object.__setattr__(self, "loyalty", loyalty)
        object.__setattr__(self, "leave_rate", leave)
        n = shares.size
        if loyalty.size != n or leave.size != n:
            raise DimensionMismatch(
                f"shares/loyalty/leave_rate lengths differ: "
                f"{n}/{loyalty.size}/{leave.size}"
            )
        for i, ms in enumerate(shares):
            if not (0.0 < ms <= 1.0 + INPUT_TOL):
                raise InvalidScenario(
                    f"shares[{i}]={ms} outside (0, 1]", field="shares", index=i
                )
        total = float(shares.sum())
        if abs(total - 1.0) > INPUT_TOL:
            raise InvalidScenario(
                f"shares sum to {total}, expected 1", field="shares"
            )
        for i, r in enumerate(loyalty):
            if not (-INPUT_TOL <= r <= 1.0 + INPUT_TOL):
                raise InvalidScenario(
                    f"loyalty[{i}]={r} outside [0, 1]", field="loyalty", index=i
                )
        for i, (r, v) in enumerate(zip(loyalty, leave)):
            if v < -INPUT_TOL:
                raise InvalidScenario(
                    f"leave_rate[{i}]={v} is negative", field="leave_rate", index=i
                )
            if r + v > 1.0 + INPUT_TOL:
                raise InvalidScenario(
                    f"loyalty[{i}]+leave_rate[{i}]={r + v} exceeds 1",
                    field="leave_rate",
                    index=i,
                )
        if not (self.growth_rate >= 0.0 and np.isfinite(self.growth_rate)):
            raise InvalidScenario(
                f"growth_rate={self.growth_rate} must be >= 0", field="growth_rate"
            )
        if not (self.population > 0.0 and np.isfinite(self.population)):
            raise InvalidScenario(
                f"population={self.population} must be > 0", field="population"
            )
        # Post-collaboration market size must stay positive.
        v_o = float(np.dot(leave, shares))
        if 1.0 + self.growth_rate - v_o <= 0.0:
            raise InvalidScenario(
                "market collapses: leaving customers exceed population plus growth",
                field="leave_rate",
            )

    @property
    def n(self) -> int:
        return self.shares.size


@dataclass(frozen=True)
class MarketAggregates:
    """Overall market-dynamics factors derived from a scenario.

    v_o:   overall market-leaving rate
    e:     expanded market scale (post size as a multiple of the
           original population)
    f_o:   proportion of vacillating customers (free + new entrants)
           relative to the new population
    r_hat: per-firm proportion of retained old customers relative to
           the new population
    """

    v_o: float
    e: float
    f_o: float
    r_hat: np.ndarray


@dataclass(frozen=True)
class ImprovementProfile:
    """Per-firm model-performance improvements.

    ``d`` holds absolute loss reductions (>= 0); ``q`` the relative
    improvements d_i / sum(d).  Relative service quality equals ``q``
    exactly (the quality weight alpha cancels).  ``degenerate`` marks
    the all-zero-improvement convention q_i = 1/n.
    """

    d: np.ndarray
    q: np.ndarray
    degenerate: bool = False

    def __post_init__(self):
        d = _as_vector(self.d, "d")
        q = _as_vector(self.q, "q")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "q", q)
        if d.size != q.size:
            raise DimensionMismatch(f"d/q lengths differ: {d.size}/{q.size}")
        for i, di in enumerate(d):
            if di < -INPUT_TOL:
                raise InvalidScenario(f"d[{i}]={di} is negative", field="d", index=i)
        for i, qi in enumerate(q):
            if not (-INPUT_TOL <= qi <= 1.0 + INPUT_TOL):
                raise InvalidScenario(
                    f"q[{i}]={qi} outside [0, 1]", field="q", index=i
                )
        total = float(q.sum())
        if abs(total - 1.0) > INPUT_TOL:
            raise InvalidScenario(f"q sums to {total}, expected 1", field="q")

    @classmethod
    def from_absolute(cls, d) -> "ImprovementProfile":
        """Build a profile from absolute improvements.

        When every improvement is zero the relative split is undefined;
        by convention it falls back to the uniform 1/n split and the
        profile is flagged degenerate.
        """
        d = _as_vector(d, "d")
        total = float(d.sum())
        if total <= 0.0:
            n = d.size
            return cls(d=d, q=np.full(n, 1.0 / n), degenerate=True)
        return cls(d=d, q=d / total)

    @classmethod
    def from_relative(cls, q) -> "ImprovementProfile":
        """Build a profile directly from relative improvements."""
        q = _as_vector(q, "q")
        return cls(d=q.copy(), q=q)

    @property
    def n(self) -> int:
        return self.q.size


@dataclass(frozen=True)
class MarketOutcome:
    """Post-collaboration market state.

    ``flow_loyal``, ``flow_free`` and ``flow_new`` break each firm's new
    customer count into retained, switched-in, and newly entered.
    """

    new_population: float
    new_shares: np.ndarray
    variances: np.ndarray
    flow_loyal: np.ndarray
    flow_free: np.ndarray
    flow_new: np.ndarray


def compute_aggregates(scenario: MarketScenario) -> MarketAggregates:
    """Derive the overall-dynamics factors (v_o, e, f_o, r_hat)."""
    ms, r, nu = scenario.shares, scenario.loyalty, scenario.leave_rate
    v_o = float(np.dot(nu, ms))
    e = 1.0 + scenario.growth_rate - v_o
    free_mass = scenario.growth_rate + float(np.dot(1.0 - r - nu, ms))
    if -INPUT_TOL < free_mass < 0.0:
        free_mass = 0.0  # rounding noise when r_i + nu_i = 1 everywhere
    f_o = free_mass / e
    r_hat = r * ms / e
    return MarketAggregates(v_o=v_o, e=e, f_o=f_o, r_hat=r_hat)


def compute_outcome(
    scenario: MarketScenario, profile: ImprovementProfile
) -> MarketOutcome:
    """Compute post-collaboration shares and customer flows.

    Each firm keeps its loyal customers and attracts free and new
    customers in proportion to its relative service quality ``q``.
    """
    if profile.n != scenario.n:
        raise DimensionMismatch(
            f"profile has {profile.n} firms, scenario has {scenario.n}"
        )
    agg = compute_aggregates(scenario)
    ms, r, nu = scenario.shares, scenario.loyalty, scenario.leave_rate
    p = scenario.population
    s = profile.q

    flow_loyal = r * ms * p
    free_pool = float(np.dot(1.0 - r - nu, ms)) * p
    flow_free = s * free_pool
    flow_new = s * scenario.growth_rate * p
    new_population = agg.e * p
    new_shares = (flow_loyal + flow_free + flow_new) / new_population
    return MarketOutcome(
        new_population=new_population,
        new_shares=new_shares,
        variances=ms - new_shares,
        flow_loyal=flow_loyal,
        flow_free=flow_free,
        flow_new=flow_new,
    )


def variance(
    scenario: MarketScenario, profile: ImprovementProfile, i: int
) -> float:
    """Market variance of firm ``i``: the share it loses, MS_i - MS_i'."""
    if not 0 <= i < scenario.n:
        raise IndexOutOfRange(f"firm index {i} outside [0, {scenario.n})")
    return float(compute_outcome(scenario, profile).variances[i])
