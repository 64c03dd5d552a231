"""Exception types shared across the package."""


class GGMError(Exception):
    """Base class for all package errors."""


class NotPositiveDefinite(GGMError, ValueError):
    pass


class InvalidIndexSet(GGMError, ValueError):
    pass


class DimensionMismatch(GGMError, ValueError):
    pass


class NotChordal(GGMError, ValueError):
    pass


class TooLarge(GGMError, ValueError):
    pass


class OutOfRange(GGMError, ValueError):
    pass


class NotCompletable(GGMError, ValueError):
    pass


class DegenerateConfiguration(GGMError, ValueError):
    pass


class EmptyData(GGMError, ValueError):
    pass


class InsufficientSamples(GGMError, ValueError):
    pass


class NotConverged(GGMError, RuntimeError):
    """Raised when a diagnostic needs a converged fit and did not get one."""


class IterationCapExceeded(GGMError, RuntimeError):
    pass
