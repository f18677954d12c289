"""Exception types shared across the package."""

from __future__ import annotations


class NumrangeError(Exception):
    """Base class for every error raised by :mod:`numrange`."""


class DimensionError(NumrangeError, ValueError):
    """Input array has the wrong shape (non-square, empty, ...)."""


class PreconditionError(NumrangeError, ValueError):
    """An operation was called with arguments violating its contract."""


class ConvergenceError(NumrangeError, ArithmeticError):
    """An iterative kernel did not converge within its budget."""

    def __init__(self, message: str, residual: float = float("nan")):
        super().__init__(message)
        self.residual = residual


class BranchBreakError(NumrangeError, ArithmeticError):
    """Eigenvector continuation lost track of a branch at ``theta``."""

    def __init__(self, message: str, theta: float, overlap: float):
        super().__init__(message)
        self.theta = theta
        self.overlap = overlap


class CurveInvalidError(NumrangeError, ValueError):
    """Curve data violates the regularity condition h + h'' > 0."""


class ContainmentError(NumrangeError, ValueError):
    """The numerical range is not contained in the closed region of a curve."""

    def __init__(self, message: str, excess: float):
        super().__init__(message)
        self.excess = excess


class UnsupportedError(NumrangeError, ValueError):
    """Requested oracle or construction is not available for this input."""
