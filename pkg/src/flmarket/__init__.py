"""Decision support for federated learning participation in
competitive markets: post-collaboration market shares, per-firm
stability bounds, the friendliness index, viability verdicts, and a
data-commitment game with a verifiable dominant strategy."""

from .errors import (
    DegenerateMarket,
    DimensionMismatch,
    FLMarketError,
    GridTooLarge,
    IndexOutOfRange,
    InvalidConfig,
    InvalidDelta,
    InvalidScenario,
    NotViable,
    ScenarioParseError,
    StrategyOutOfRange,
)
from .game import (
    DominanceResult,
    ExchangeScheme,
    GameSpec,
    LossCurve,
    best_response,
    federated_loss,
    improvements,
    payoff,
    verify_dominant_strategy,
)
from .market import (
    ImprovementProfile,
    MarketAggregates,
    MarketOutcome,
    MarketScenario,
    compute_aggregates,
    compute_outcome,
    variance,
)
from .stability import (
    StabilityReport,
    allocate,
    friendliness,
    full_report,
    is_delta_stable,
    min_improvements,
    viability,
)

__all__ = [
    "DegenerateMarket",
    "DimensionMismatch",
    "DominanceResult",
    "ExchangeScheme",
    "FLMarketError",
    "GameSpec",
    "GridTooLarge",
    "ImprovementProfile",
    "IndexOutOfRange",
    "InvalidConfig",
    "InvalidDelta",
    "InvalidScenario",
    "LossCurve",
    "MarketAggregates",
    "MarketOutcome",
    "MarketScenario",
    "NotViable",
    "ScenarioParseError",
    "StabilityReport",
    "StrategyOutOfRange",
    "allocate",
    "best_response",
    "compute_aggregates",
    "compute_outcome",
    "federated_loss",
    "friendliness",
    "full_report",
    "improvements",
    "is_delta_stable",
    "min_improvements",
    "payoff",
    "variance",
    "verify_dominant_strategy",
    "viability",
]

__version__ = "0.1.0"
