"""Exception types shared across the package."""


class FLMarketError(Exception):
    """Base class for all flmarket errors."""


class InvalidScenario(FLMarketError):
    """A market scenario violates one of its invariants.

    ``field`` names the offending parameter and ``index`` the offending
    firm, when applicable.
    """

    def __init__(self, message: str, field: str | None = None, index: int | None = None):
        super().__init__(message)
        self.field = field
        self.index = index


class DimensionMismatch(FLMarketError):
    """Vector lengths disagree with the scenario's firm count."""


class IndexOutOfRange(FLMarketError):
    """A firm index is outside [0, n)."""


class InvalidDelta(FLMarketError):
    """The stability threshold is outside the open interval (-1, 1)."""


class DegenerateMarket(FLMarketError):
    """The market has no vacillating customers (f_o = 0); the
    friendliness index and viability verdict are undefined."""


class NotViable(FLMarketError):
    """No feasible improvement allocation exists (kappa < 0)."""


class StrategyOutOfRange(FLMarketError):
    """A data-commitment strategy lies outside [0, dataset size]."""


class GridTooLarge(FLMarketError):
    """Brute-force verification would exceed the evaluation budget."""


class InvalidConfig(FLMarketError):
    """A sweep configuration is empty or produces invalid scenarios."""


class ScenarioParseError(FLMarketError):
    """A scenario document cannot be parsed or fails schema validation."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field
