"""Exception types shared across the library."""

from __future__ import annotations


class InvalidInputError(ValueError):
    """Input violates a documented precondition (bad degree, shape, range)."""


class UnsupportedSizeError(InvalidInputError):
    """Matrix or polynomial size beyond the supported conditioning guard."""


class ConvergenceError(RuntimeError):
    """Root iteration did not reach the residual tolerance.

    Carries the best iterate and its scaled residual so callers can inspect
    or retry with looser settings.
    """

    def __init__(self, message, best=None, residual=None):
        super().__init__(message)
        self.best = best
        self.residual = residual


class NumericConsistencyError(ArithmeticError):
    """A quantity that is mathematically real/zero failed its residual check."""


class RejectedStartError(ValueError):
    """Search objective is undefined at the requested start configuration."""
