"""Exception types shared across the package."""

from __future__ import annotations


class DcError(Exception):
    """Base class for all package errors."""


class StructureError(DcError, TypeError):
    """Elements or measures from different groups were combined."""


class GenSetError(DcError, ValueError):
    """A generating set violates the symmetric-with-identity requirement."""


class ConfigError(DcError, ValueError):
    """A group, subgroup or run configuration could not be understood."""


class ResourceError(DcError, RuntimeError):
    """A size cap was hit.

    ``last_completed`` is the last radius / power / index that finished
    before the cap was exceeded (``None`` if nothing completed).
    """

    def __init__(self, message: str, last_completed: int | None = None):
        super().__init__(message)
        self.last_completed = last_completed


class VerificationError(DcError, AssertionError):
    """A machine-checked inequality or identity failed."""

    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message)
        self.witness = witness or {}


class ModeError(DcError, ValueError):
    """Exact-rational and float measures were mixed."""


class AperiodicityError(DcError, ValueError):
    """A random-walk step puts no mass on the identity."""
