"""Exception hierarchy.

Every error raised for bad input derives from :class:`SmoothingError`, which
is itself a ``ValueError`` so callers that only care about "bad value" can
catch the builtin.
"""


class SmoothingError(ValueError):
    """Base class for all input/validation errors raised by arsmooth."""


class TooShortError(SmoothingError):
    pass


class NonFiniteError(SmoothingError):
    pass


class WindowTooWideError(SmoothingError):
    pass


class ZeroWidthError(SmoothingError):
    pass


class InvalidWeightsError(SmoothingError):
    """Weights are negative, asymmetric, non-tapering or badly normalized."""


class AllZeroThetaError(SmoothingError):
    pass


class ZeroDataMassError(SmoothingError):
    """The data-fidelity mass A is zero, so the minimizer is not unique."""


class DegenerateCenterWeightError(SmoothingError):
    """w_0 == 0: every constant signal minimizes the objective."""


class LengthMismatchError(SmoothingError):
    pass


class NoSmoothingTermError(SmoothingError):
    """The kernel has no off-center coefficient, hence no characteristic root."""


class TooLargeForOracleError(SmoothingError):
    pass


class SingularSystemError(SmoothingError):
    pass


class VerificationError(RuntimeError):
    """A cross-check between the fast path and the dense oracle failed."""
