"""Non-cooperative data-commitment game.

Each firm chooses how many local samples x_i in [0, D_i] to commit to
collaborative training.  Model loss follows a power-law learning curve
over the effective data a firm sees,

    m_i(x) = D_i + self_gain * x_i + peer_gain * sum_{j != i} x_j,

so committing more data strictly lowers a firm's own loss.  The payoff
is the firm's post-collaboration market share; committing the full
dataset is a dominant strategy, which ``verify_dominant_strategy``
checks by brute force over discretized strategy grids.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    GridTooLarge,
    IndexOutOfRange,
    InvalidScenario,
    StrategyOutOfRange,
)
from .market import ImprovementProfile, MarketScenario, compute_aggregates, compute_outcome

DOMINANCE_TOL = 1e-12
DEFAULT_EVAL_BUDGET = 10_000_000


@dataclass(frozen=True)
class LossCurve:
    """Power-law learning curve: loss(m) = scale * m**(-decay) + floor.

    Strictly decreasing in the effective data m for scale > 0 and
    decay > 0, and bounded below by the irreducible ``floor``.
    """

    scale: float
    decay: float
    floor: float = 0.0

    def __post_init__(self):
        if not (self.scale > 0.0):
            raise InvalidScenario(f"scale={self.scale} must be > 0", field="scale")
        if not (self.decay > 0.0):
            raise InvalidScenario(f"decay={self.decay} must be > 0", field="decay")
        if self.floor < 0.0:
            raise InvalidScenario(f"floor={self.floor} must be >= 0", field="floor")

    @classmethod
    def unchecked(cls, scale: float, decay: float, floor: float = 0.0) -> "LossCurve":
        """Bypass validation; for negative-control tests only."""
        curve = object.__new__(cls)
        object.__setattr__(curve, "scale", scale)
        object.__setattr__(curve, "decay", decay)
        object.__setattr__(curve, "floor", floor)
        return curve

    def loss(self, m) -> float | np.ndarray:
        return self.scale * np.asarray(m, dtype=float) ** (-self.decay) + self.floor


@dataclass(frozen=True)
class ExchangeScheme:
    """Model-exchange scheme, reduced to two effective-data gains.

    self_gain: marginal effective data per own committed sample
    peer_gain: marginal effective data per sample committed by another
               firm; at most self_gain, reflecting benefit proportional
               to contribution
    """

    self_gain: float = 1.0
    peer_gain: float = 0.5

    def __post_init__(self):
        if not (self.self_gain > 0.0):
            raise InvalidScenario(
                f"self_gain={self.self_gain} must be > 0", field="self_gain"
            )
        if not (0.0 <= self.peer_gain <= self.self_gain):
            raise InvalidScenario(
                f"peer_gain={self.peer_gain} outside [0, self_gain]",
                field="peer_gain",
            )

    @classmethod
    def centralized(cls, n: int, self_gain: float = 1.0) -> "ExchangeScheme":
        """Global-aggregation preset: peers transfer (n-1)/n of a sample."""
        if n < 1:
            raise InvalidScenario(f"n={n} must be >= 1", field="n")
        return cls(self_gain=self_gain, peer_gain=self_gain * (n - 1) / n if n > 1 else 0.0)


@dataclass(frozen=True)
class GameSpec:
    """The full game: market scenario, datasets, curves, and scheme."""

    scenario: MarketScenario
    dataset_sizes: np.ndarray
    curves: tuple[LossCurve, ...]
    exchange: ExchangeScheme
    grid_points: int = 5
    eval_budget: int = DEFAULT_EVAL_BUDGET

    def __post_init__(self):
        sizes = np.asarray(self.dataset_sizes, dtype=float)
        object.__setattr__(self, "dataset_sizes", sizes)
        object.__setattr__(self, "curves", tuple(self.curves))
        n = self.scenario.n
        if sizes.ndim != 1 or sizes.size != n:
            raise DimensionMismatch(
                f"dataset_sizes has {sizes.size} entries, scenario has {n} firms"
            )
        if np.any(sizes <= 0):
            idx = int(np.flatnonzero(sizes <= 0)[0])
            raise InvalidScenario(
                f"dataset_sizes[{idx}]={sizes[idx]} must be > 0",
                field="dataset_sizes",
                index=idx,
            )
        if len(self.curves) != n:
            raise DimensionMismatch(
                f"curves has {len(self.curves)} entries, scenario has {n} firms"
            )
        if self.grid_points < 2:
            raise InvalidScenario(
                f"grid_points={self.grid_points} must be >= 2", field="grid_points"
            )

    @property
    def n(self) -> int:
        return self.scenario.n


def _check_strategies(spec: GameSpec, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size != spec.n:
        raise DimensionMismatch(
            f"strategy vector has {x.size} entries, game has {spec.n} firms"
        )
    bad = np.flatnonzero((x < 0) | (x > spec.dataset_sizes))
    if bad.size:
        i = int(bad[0])
        raise StrategyOutOfRange(
            f"x[{i}]={x[i]} outside [0, {spec.dataset_sizes[i]}]"
        )
    return x


def effective_data(spec: GameSpec, x) -> np.ndarray:
    """Effective data each firm sees under strategy profile x."""
    x = _check_strategies(spec, x)
    lam, beta = spec.exchange.self_gain, spec.exchange.peer_gain
    return spec.dataset_sizes + (lam - beta) * x + beta * x.sum()


def standalone_losses(spec: GameSpec) -> np.ndarray:
    """Each firm's loss when training only on its own full dataset."""
    return np.array(
        [c.loss(d) for c, d in zip(spec.curves, spec.dataset_sizes)]
    )


def federated_loss(spec: GameSpec, x, i: int) -> float:
    """Firm i's loss after collaborative training under profile x."""
    if not 0 <= i < spec.n:
        raise IndexOutOfRange(f"firm index {i} outside [0, {spec.n})")
    m = effective_data(spec, x)
    return float(spec.curves[i].loss(m[i]))


def improvements(spec: GameSpec, x) -> ImprovementProfile:
    """Absolute and relative improvements under profile x."""
    m = effective_data(spec, x)
    d = standalone_losses(spec) - np.array(
        [c.loss(mi) for c, mi in zip(spec.curves, m)]
    )
    return ImprovementProfile.from_absolute(d)


def payoff(spec: GameSpec, x, i: int) -> float:
    """Firm i's payoff: its post-collaboration market share."""
    if not 0 <= i < spec.n:
        raise IndexOutOfRange(f"firm index {i} outside [0, {spec.n})")
    outcome = compute_outcome(spec.scenario, improvements(spec, x))
    return float(outcome.new_shares[i])


def strategy_grid(spec: GameSpec, i: int) -> np.ndarray:
    """Uniform strategy grid over [0, D_i], endpoints included."""
    return np.linspace(0.0, float(spec.dataset_sizes[i]), spec.grid_points)


def _payoff_table(spec: GameSpec) -> np.ndarray:
    """Payoffs of every firm at every grid profile.

    Returns an array of shape (g,)*n + (n,), indexed by per-firm grid
    indices; fully vectorized so brute-force checks stay fast.
    """
    g, n = spec.grid_points, spec.n
    grids = [strategy_grid(spec, i) for i in range(n)]
    mesh = np.meshgrid(*grids, indexing="ij")
    x = np.stack([m.ravel() for m in mesh], axis=-1)  # (g**n, n)

    lam, beta = spec.exchange.self_gain, spec.exchange.peer_gain
    m_eff = spec.dataset_sizes + (lam - beta) * x + beta * x.sum(axis=1, keepdims=True)
    base = standalone_losses(spec)
    loss = np.stack(
        [spec.curves[i].loss(m_eff[:, i]) for i in range(n)], axis=-1
    )
    d = base - loss
    total = d.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.where(total > 0.0, d / np.where(total > 0.0, total, 1.0), 1.0 / n)

    agg = compute_aggregates(spec.scenario)
    shares = agg.r_hat + q * agg.f_o
    return shares.reshape((g,) * n + (n,))


@dataclass(frozen=True)
class DominanceResult:
    """Outcome of the brute-force dominance check.

    ``counterexample`` is (firm, better_strategy, others' strategies)
    for the first grid point where committing the full dataset is not a
    best response.
    """

    holds: bool
    counterexample: tuple[int, float, tuple[float, ...]] | None = None


def verify_dominant_strategy(spec: GameSpec) -> DominanceResult:
    """Check that committing the full dataset dominates on the grid.

    For every firm i and every grid profile, the payoff at x_i = D_i
    must be at least the payoff at the profile's own x_i (up to a
    1e-12 numerical slack).
    """
    g, n = spec.grid_points, spec.n
    evals = n * g**n
    if evals > spec.eval_budget:
        raise GridTooLarge(
            f"{evals} payoff evaluations exceed the budget of {spec.eval_budget}"
        )
    table = _payoff_table(spec)
    grids = [strategy_grid(spec, i) for i in range(n)]
    for i in range(n):
        pay_i = table[..., i]
        at_full = np.take(pay_i, -1, axis=i)
        deficit = pay_i - np.expand_dims(at_full, axis=i)
        bad = np.argwhere(deficit > DOMINANCE_TOL)
        if bad.size:
            idx = tuple(int(k) for k in bad[0])
            x_i_prime = float(grids[i][idx[i]])
            x_minus_i = tuple(
                float(grids[j][idx[j]]) for j in range(n) if j != i
            )
            return DominanceResult(
                holds=False, counterexample=(i, x_i_prime, x_minus_i)
            )
    return DominanceResult(holds=True)


def best_response(spec: GameSpec, i: int, x_minus_i) -> float:
    """Grid argmax of firm i's payoff with the others' strategies fixed.

    Ties break toward the largest commitment.
    """
    if not 0 <= i < spec.n:
        raise IndexOutOfRange(f"firm index {i} outside [0, {spec.n})")
    x_minus_i = np.asarray(x_minus_i, dtype=float)
    if x_minus_i.size != spec.n - 1:
        raise DimensionMismatch(
            f"x_minus_i has {x_minus_i.size} entries, expected {spec.n - 1}"
        )
    grid = strategy_grid(spec, i)
    pays = np.array(
        [payoff(spec, np.insert(x_minus_i, i, xi), i) for xi in grid]
    )
    tied = np.flatnonzero(pays >= pays.max() - DOMINANCE_TOL)
    return float(grid[tied[-1]])
