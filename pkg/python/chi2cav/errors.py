"""
Exception hierarchy for chi2cav.

Library code raises these; only the command-line layer turns them into exit codes.
"""

from typing import Any, Optional


class Chi2CavError(Exception):
    """Base class for every error raised by chi2cav."""


class DomainError(Chi2CavError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UnsupportedRegimeError(Chi2CavError):
    """A closed form was requested outside the regime it was derived for."""


class ConfigError(Chi2CavError):
    """A configuration file could not be read or failed validation."""


class NonConvergenceError(Chi2CavError):
    """
    A numerical procedure failed to converge.

    Attributes:
        partial: Whatever was computed before the failure (a Trajectory, a list of
            sweep rows, ...), or None.
    """

    def __init__(self, message: str, partial: Optional[Any] = None):
        super().__init__(message)
        self.partial = partial


class AmbiguousBranchError(Chi2CavError):
    """
    A converged steady state sits inside the branch dead-band while the trivial
    branch is not strictly stable, so trivial and ndopo cannot be told apart.

    Attributes:
        state: The converged FieldState.
    """

    def __init__(self, message: str, state: Optional[Any] = None):
        super().__init__(message)
        self.state = state
