"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`MovingMeansError`, which is itself a :class:`ValueError`, so callers
may catch either.
"""


class MovingMeansError(ValueError):
    """Base class for all domain errors of the package."""


# weights
class WeightsError(MovingMeansError):
    pass


class NegativeWeightError(WeightsError):
    pass


class SumNotOneError(WeightsError):
    def __init__(self, total, deviation):
        self.total = total
        self.deviation = deviation
        super().__init__(f"weights sum to {total}, deviation {deviation} from 1")


class TooShortError(WeightsError):
    pass


class DegenerateAllZeroTailError(WeightsError):
    pass


class HypothesisFailsError(MovingMeansError):
    """The Basic Hypothesis (unique dominant simple root 1) does not hold."""


# spectral / matrices
class DegeneratePairingError(MovingMeansError):
    pass


class NoConvergenceError(MovingMeansError):
    def __init__(self, message, best=None, residual=None):
        self.best = best
        self.residual = residual
        super().__init__(message)


class DimensionMismatchError(MovingMeansError):
    pass


class IndexOutOfRangeError(MovingMeansError):
    pass


# means
class BadParameterError(MovingMeansError):
    pass


class DomainViolationError(MovingMeansError):
    pass


class NearSingularError(MovingMeansError):
    pass


class NotSpdError(MovingMeansError):
    pass


# convex functions
class ImproperFunctionError(MovingMeansError):
    pass


class NotConvexError(MovingMeansError):
    pass


class NegativeScaleError(MovingMeansError):
    pass


class NotCofiniteError(MovingMeansError):
    pass


class GridMismatchError(MovingMeansError):
    pass


class EnvelopeRecursionError(MovingMeansError):
    pass


# command line
class ConfigError(MovingMeansError):
    """Unreadable, missing or malformed input."""
