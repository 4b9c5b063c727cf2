"""Exception types shared across the package."""


class ToricError(Exception):
    """Base class for domain errors (the CLI maps these to exit code 1)."""


class InvalidPolytope(ToricError):
    pass


class NotNEF(ToricError):
    pass


class UncoveredPattern(ToricError):
    """The chern pattern around the acting facet has no closed form."""


class MultiplicityUnsupported(ToricError):
    """A fixed-point graph would need an edge covered with degree >= 2."""


class WeightDependence(ToricError):
    """Localization sums disagreed between weight samples."""


class DatabaseMiss(ToricError):
    pass


class IntegrationError(ToricError):
    """Derivative data does not come from a single potential."""


class PrecisionError(ToricError):
    """A comparison asked for more terms than a series guarantees."""


class PolytopeParseError(ValueError):
    """Malformed polytope file; carries a 1-based line/column."""

    def __init__(self, message, line=1, col=1):
        super().__init__("line %d, column %d: %s" % (line, col, message))
        self.message = message
        self.line = line
        self.col = col
