"""Exception hierarchy shared by all modules.

Everything numerical raises a subclass of :class:`VarextropyError`, so callers
(notably the CLI) can separate bad input from statistical failure with a
single ``except`` clause.
"""


class VarextropyError(Exception):
    """Base class for all errors raised by this package."""


class EmptyOrSingleton(VarextropyError):
    """Fewer than two observations."""


class NonFiniteValue(VarextropyError):
    """NaN or infinity in the input; ``index`` is the offending position."""

    def __init__(self, index, value=None):
        self.index = index
        self.value = value
        super().__init__(f"non-finite value at index {index}: {value!r}")


class ZeroVariance(VarextropyError):
    """All observations equal; scale-dependent quantities are undefined."""


class NonpositiveScale(VarextropyError):
    """Bandwidth rule needs a strictly positive scale."""


class TooFewPoints(VarextropyError):
    """Operation needs more observations than were supplied."""


class TiedSpacings(VarextropyError):
    """A spacing denominator is zero; ``index`` is the first offending term."""

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"tied order statistics give a zero spacing at term {index}")


class WindowTooLarge(VarextropyError):
    """Window size violates its bound for the given sample size."""


class IndexOutOfRange(VarextropyError):
    """Index outside the valid 1..n range."""


class LengthMismatch(VarextropyError):
    """Array length does not match the evaluation grid."""


class GridTooNarrow(VarextropyError):
    """Evaluation grid misses a non-negligible share of the density mass."""


class DegenerateDensity(VarextropyError):
    """A density value underflowed to zero where a positive value is required."""


class OutOfUnitInterval(VarextropyError):
    """Observation outside [0, 1]; ``index`` is the position in the sorted sample."""

    def __init__(self, index, value):
        self.index = index
        self.value = value
        super().__init__(f"observation {value!r} at sorted index {index} is outside [0, 1]")


class MissingCriticalValue(VarextropyError):
    """No calibrated critical value for this sample size."""

    def __init__(self, n):
        self.n = n
        super().__init__(f"no critical value calibrated for n={n}")


class DomainError(VarextropyError):
    """Value outside the support of the reference distribution."""


class NoConvergence(VarextropyError):
    """Numerical fit failed to converge."""


class UnsupportedFamily(VarextropyError):
    """Distribution family not recognised by this operation."""
