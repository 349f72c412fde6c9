"""Exception types shared by every RadialNS package."""

from __future__ import annotations


class RadialNSError(Exception):
    """Base class for all solver errors."""


class DomainError(RadialNSError, ValueError):
    """A parameter or argument lies outside the range an operation accepts."""


class AdmissibilityError(DomainError):
    """(γ, δ) violates the existence conditions and no override was given."""


class PositivityError(RadialNSError):
    """A field that must stay strictly positive (ρ, h, φ) did not."""


class CFLViolation(RadialNSError):
    """The time step exceeds the explicit stability limit of a kernel."""


class SingularSystemError(RadialNSError):
    """The momentum system could not be solved or produced non-finite values."""


class NonContractionError(RadialNSError):
    """The Picard functional grew for three consecutive iterations."""


class CharacteristicExitError(RadialNSError):
    """A characteristic path left the truncated domain."""


class ConfigError(RadialNSError, ValueError):
    """A configuration file or command line could not be parsed."""


class SolverFailure(RadialNSError):
    """A run stopped on a kernel or iteration error.

    ``t`` is the simulation time of the last accepted state.
    """

    def __init__(self, message: str, *, t: float) -> None:
        super().__init__(f"{message} (t={t!r})")
        self.t = t
