"""Exception types raised by the solver and its helpers."""


class NcqpError(Exception):
    """Base class for all errors raised by this package.

    ``phase`` is filled in by :func:`ncqpbtr.solver.solve` when an error
    escapes one of the three solver phases.
    """

    phase = None


class ProblemError(NcqpError, ValueError):
    """The problem data is unusable."""


class InfeasibleDomain(ProblemError):
    """Box and trust region do not intersect in an open set."""


class BadBounds(ProblemError):
    """Some lower box bound is not strictly below its upper bound."""


class BadParameters(ProblemError):
    """A scalar parameter is out of its admissible range."""


class NonFinite(ProblemError):
    """The problem data contains NaN or infinite entries."""


class NotPositiveDefinite(NcqpError, ArithmeticError):
    """A Cholesky pivot was non-positive."""


class NumericalFailure(NcqpError, ArithmeticError):
    """Newton's method stalled or produced non-finite quantities."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class EntryConditionViolated(NcqpError):
    """The starting point of a path-following phase is not close enough to
    the central path."""


class NoSignChange(NcqpError, ValueError):
    pass


class DimensionTooLarge(NcqpError, ValueError):
    pass


class NotConvexOnSample(NcqpError):
    """A sampled second directional derivative was not positive."""
