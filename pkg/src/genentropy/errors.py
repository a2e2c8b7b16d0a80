"""Exception hierarchy.

Every error is a ``ValueError`` subclass so callers that only care about
"bad input" can catch one thing; the CLI maps them onto exit codes.
"""


class GenEntropyError(ValueError):
    """Base class for all library errors."""


class DomainError(GenEntropyError):
    """An argument lies outside the domain of the operation."""


class RegionError(GenEntropyError):
    """The (alpha, beta) pair is outside the admissible parameter region."""


class NondegenerateParamError(GenEntropyError):
    """The operation needs two distinct deformation parameters (or a nonzero normalizer)."""


class MonotonicityError(GenEntropyError):
    """A map that must be strictly monotone failed the grid check."""


class RangeError(GenEntropyError):
    """The requested value is not attained by the map being inverted."""


class NoConvergenceError(GenEntropyError):
    """An iterative solver ran out of budget.

    ``trace`` holds whatever per-iteration record the solver kept.
    """

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = list(trace or [])


class DegenerateDirectionError(GenEntropyError):
    """A direction through (1, 1) along which alpha - beta vanishes identically."""
