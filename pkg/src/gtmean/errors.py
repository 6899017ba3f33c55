"""Exception types raised across the package."""


class GtMeanError(Exception):
    """Base class for every error raised by gtmean."""


class DimensionMismatch(GtMeanError, ValueError):
    pass


class NotPositiveDefinite(GtMeanError, ValueError):
    pass


class IllConditioned(GtMeanError, ArithmeticError):
    pass


class SingularTransform(GtMeanError, ValueError):
    pass


class NegativeTrace(GtMeanError, ArithmeticError):
    pass


class NegativeDivergence(GtMeanError, ArithmeticError):
    pass


class StepTooLarge(GtMeanError, ValueError):
    pass


class ParameterOutOfRange(GtMeanError, ValueError):
    pass


class PreconditionViolated(GtMeanError, ValueError):
    pass


class RankDeficient(GtMeanError, ValueError):
    pass


class MaxIterExceeded(GtMeanError, RuntimeError):
    """Iteration cap hit before convergence.

    ``best`` holds the iterate with the smallest observed step and
    ``residual`` that step (Thompson distance).
    """

    def __init__(self, message, best=None, residual=float("nan"), iterations=0):
        super().__init__(message)
        self.best = best
        self.residual = residual
        self.iterations = iterations
