"""Shared randomized generators and independent oracles.

The oracles transliterate the share-update formula term by term in
plain Python floats, independently of the library's flow-based
implementation, so the two sides of every equivalence test stay
decoupled.
"""

import numpy as np
import pytest

from flmarket import ImprovementProfile, MarketScenario


def random_scenario(
    rng: np.random.Generator,
    n: int | None = None,
    min_f_o: float = 0.0,
    max_n: int = 8,
) -> MarketScenario:
    """Draw a valid scenario; resample until f_o exceeds ``min_f_o``."""
    while True:
        size = n if n is not None else int(rng.integers(1, max_n + 1))
        shares = rng.dirichlet(np.ones(size)) * 0.98 + 0.02 / size
        shares = shares / shares.sum()
        loyalty = rng.uniform(0.0, 1.0, size)
        leave = rng.uniform(0.0, 1.0 - loyalty)
        theta = float(rng.uniform(0.0, 1.0))
        scenario = MarketScenario(
            shares=shares, loyalty=loyalty, leave_rate=leave, growth_rate=theta
        )
        if oracle_f_o(scenario) > min_f_o:
            return scenario


def random_profile(rng: np.random.Generator, n: int) -> ImprovementProfile:
    q = rng.dirichlet(np.ones(n))
    return ImprovementProfile.from_relative(q)


def oracle_new_share(scenario: MarketScenario, q, i: int) -> float:
    """Term-by-term evaluation of the post-collaboration share formula."""
    ms = [float(v) for v in scenario.shares]
    r = [float(v) for v in scenario.loyalty]
    nu = [float(v) for v in scenario.leave_rate]
    theta = scenario.growth_rate
    s_i = float(q[i])
    free = sum((1.0 - r[j] - nu[j]) * ms[j] for j in range(len(ms)))
    numerator = r[i] * ms[i] + s_i * free + s_i * theta
    denominator = (1.0 + theta) - sum(nu[j] * ms[j] for j in range(len(ms)))
    return numerator / denominator


def oracle_variance(scenario: MarketScenario, q, i: int) -> float:
    return float(scenario.shares[i]) - oracle_new_share(scenario, q, i)


def oracle_is_stable(scenario: MarketScenario, q, delta: float) -> bool:
    """Definitional stability check: no firm loses more than delta."""
    return all(
        oracle_variance(scenario, q, i) <= delta for i in range(scenario.n)
    )


def oracle_f_o(scenario: MarketScenario) -> float:
    ms = [float(v) for v in scenario.shares]
    r = [float(v) for v in scenario.loyalty]
    nu = [float(v) for v in scenario.leave_rate]
    theta = scenario.growth_rate
    e = 1.0 + theta - sum(nu[j] * ms[j] for j in range(len(ms)))
    free = theta + sum((1.0 - r[j] - nu[j]) * ms[j] for j in range(len(ms)))
    return free / e


@pytest.fixture
def worked_scenario() -> MarketScenario:
    """Two-firm scenario used throughout the worked examples."""
    return MarketScenario(
        shares=[0.6, 0.4],
        loyalty=[0.8, 0.8],
        leave_rate=[0.02, 0.02],
        growth_rate=0.1,
    )


@pytest.fixture
def frozen_scenario() -> MarketScenario:
    """Fully loyal static market: shares cannot move."""
    return MarketScenario(
        shares=[0.6, 0.4],
        loyalty=[1.0, 1.0],
        leave_rate=[0.0, 0.0],
        growth_rate=0.0,
    )
