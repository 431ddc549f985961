"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes: invalid input -> 2,
probabilistic failure -> 3, resource/precision refusal -> 4.
"""


class QuadregError(Exception):
    """Base class for all package-specific failures."""


class InputError(QuadregError):
    """Caller passed something structurally invalid (bad d, bad ideal, ...)."""


class MalformedIdealError(InputError):
    """An (a, b) pair that is not a valid standard form for its discriminant."""


class PrecisionError(QuadregError):
    """A certified comparison or rounding could not be resolved at the
    working precision.  Callers may retry with more bits."""


class ResourceCapError(QuadregError):
    """Refusal: the request would exceed a configured size/memory cap."""


class BadEstimateError(QuadregError):
    """A regulator estimate handed to refinement was not within 1 of a
    multiple of the regulator."""


class TrialsExhaustedError(QuadregError):
    """The sampling pipeline used up its trial budget without a validated
    candidate.  Carries the trial statistics for reporting."""

    def __init__(self, message: str, stats: dict | None = None):
        super().__init__(message)
        self.stats = stats or {}
