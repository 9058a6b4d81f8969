"""Exception types shared across the package."""


class TeichCurrentsError(Exception):
    """Base class for all package errors."""


class NonHyperbolicError(TeichCurrentsError, ValueError):
    """An element expected to be hyperbolic is elliptic, parabolic or trivial."""


class InvalidGenusError(TeichCurrentsError, ValueError):
    pass


class EmptyWordError(TeichCurrentsError, ValueError):
    pass


class ProperPowerError(TeichCurrentsError, ValueError):
    pass


class LetterRangeError(TeichCurrentsError, IndexError):
    """A word uses a generator the holonomy does not have."""


class ValidationFailed(TeichCurrentsError):
    """A holonomy failed validation; ``report`` holds the figures."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ArcsOverlapError(TeichCurrentsError, ValueError):
    pass


class GapTooSmallError(TeichCurrentsError, ValueError):
    pass


class StabilizationFailed(TeichCurrentsError):
    """The intersection count kept changing up to the largest radius tried."""


class DegenerateInputError(TeichCurrentsError, ValueError):
    pass


class TooFewSamplesError(TeichCurrentsError, ValueError):
    pass


class IterationLimitError(TeichCurrentsError, RuntimeError):
    pass
