"""Exception types shared across the package.

Truncation of a search is never an error: truncated results are returned
as flagged data, these exceptions cover genuine failures only.
"""

from __future__ import annotations


class SparityError(Exception):
    """Base class for all package errors."""


class NotPrimePowerError(SparityError, ValueError):
    """The requested field order is not a prime power (or is < 2)."""


class FieldTooLargeError(SparityError, ValueError):
    """The requested field order exceeds the supported bound."""


class MaskFormatError(SparityError, ValueError):
    """A mask or matrix file could not be parsed."""


class WidthTooSmallError(SparityError, ValueError):
    """Window width below n - m + 1, where the MDS window family stops existing."""


class PreconditionFailedError(SparityError, ValueError):
    """An operation's stated precondition does not hold for the inputs."""

    def __init__(self, message: str, violator: tuple[int, ...] | None = None):
        super().__init__(message)
        self.violator = violator


class AttemptsExhaustedError(SparityError):
    """A randomized construction failed for every attempt in its budget."""

    def __init__(self, message: str, attempts: int = 0, diagnostics: dict | None = None):
        super().__init__(message)
        self.attempts = attempts
        self.diagnostics = diagnostics or {}


class DuplicatePointsError(SparityError, ValueError):
    """Evaluation points must be pairwise distinct."""


class ZeroMultiplierError(SparityError, ValueError):
    """Column multipliers must be nonzero."""


class RankDeficientError(SparityError, ValueError):
    """A matrix that must have full row rank does not."""


class SearchSpaceTooLargeError(SparityError):
    """Exhaustive enumeration would exceed the configured work ceiling."""


class InfeasibleError(SparityError, ValueError):
    """No mask of the requested family shape exists."""
