"""Exception hierarchy shared by services and the CLI.

``ParameterError`` maps to CLI exit code 2, every ``NumericalError`` to 3.
"""

from __future__ import annotations

import logging
from typing import Sequence

logger = logging.getLogger(__name__)


class LmgFidelityError(Exception):
    """Base class for all library errors."""


class ParameterError(LmgFidelityError, ValueError):
    """Exception raised for invalid parameters."""

    def __init__(self, message: str):
        super().__init__(message)
        logger.error(message)


class NumericalError(LmgFidelityError):
    """A requested quantity could not be computed reliably."""


class NumericalFailureError(NumericalError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual={residual:.3e})")
        self.residual = residual


class DerivativeUndefinedError(NumericalError):
    def __init__(self, field: float, reason: str = "degenerate ground state"):
        super().__init__(f"derivative undefined at h={field!r}: {reason}")
        self.field = field


class SingularSusceptibilityError(NumericalError):
    pass


class InvalidDensityError(NumericalError):
    pass


class MissingSecondDerivativeError(NumericalError):
    pass


class CriticalPointError(NumericalError):
    pass


class AmbiguousPeakError(NumericalError):
    def __init__(self, maxima: Sequence[float], reason: str = "susceptibility is not unimodal on the bracket"):
        listed = ", ".join(f"{h:.6g}" for h in maxima) or "none"
        super().__init__(f"{reason}; local maxima at h = {listed}")
        self.maxima = list(maxima)


class WindowTooCloseError(NumericalError):
    def __init__(self, curvature: float, limit: float):
        super().__init__(
            f"log-log curvature {curvature:.3g} exceeds {limit:.3g}; "
            "window overlaps the finite-size rounded region"
        )
        self.curvature = curvature


class InternalConsistencyError(NumericalError):
    pass


__all__ = [
    "LmgFidelityError",
    "ParameterError",
    "NumericalError",
    "NumericalFailureError",
    "DerivativeUndefinedError",
    "SingularSusceptibilityError",
    "InvalidDensityError",
    "MissingSecondDerivativeError",
    "CriticalPointError",
    "AmbiguousPeakError",
    "WindowTooCloseError",
    "InternalConsistencyError",
]
