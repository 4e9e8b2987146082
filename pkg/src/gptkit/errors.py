"""Exception types shared across the package.

Everything derives from ValueError so callers that only care about
"bad input" can catch a single class.
"""


class GptError(ValueError):
    """Base class for all package-specific errors."""


class DimensionError(GptError):
    """An object has the wrong dimension or incompatible shape."""


class DegenerateFrameError(GptError):
    """A projector frame is linearly dependent (Gram matrix singular)."""


class NoSignatureError(GptError):
    """A degrees-of-freedom table admits no valid signature."""


class MonotonicityError(GptError):
    """A degrees-of-freedom table is not strictly increasing."""


class PhaseRecoveryError(GptError):
    """A D matrix lies outside the region where projector phases exist."""


class InvalidExperimentError(GptError):
    """An experiment description violates its invariants."""
