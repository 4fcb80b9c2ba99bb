"""Exception types raised across the package."""


class HermrelError(Exception):
    """Base class for all errors raised by hermrel."""


class NonPrimeError(HermrelError, ValueError):
    pass


class ReducibleModulusError(HermrelError, ValueError):
    pass


class FieldTooLargeError(HermrelError, ValueError):
    pass


class ZeroInputError(HermrelError, ValueError):
    pass


class NormNotOneError(HermrelError, ValueError):
    pass


class SingularMatrixError(HermrelError, ValueError):
    pass


class EqualPointsError(HermrelError, ValueError):
    pass


class ConcurrentLinesError(HermrelError, ValueError):
    pass


class PointNotOnCurveError(HermrelError, ValueError):
    pass


class NotHermitianError(HermrelError, ValueError):
    pass


class EmbeddingUnavailableError(HermrelError):
    pass


class TooFewInflexionsError(HermrelError, ValueError):
    pass


class ShapeAssertionError(HermrelError, AssertionError):
    """The normalized matrix did not have the expected shape (a bug, not bad input)."""


class NotTypeBError(HermrelError, ValueError):
    pass


class NotApplicableError(HermrelError, ValueError):
    pass


class MethodUnavailableError(HermrelError):
    pass


class BudgetExceededError(HermrelError):
    pass
