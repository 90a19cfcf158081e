"""Exception taxonomy shared across the package."""

from __future__ import annotations


class StabgridError(Exception):
    """Base class for all stabgrid errors."""


class DomainError(StabgridError, ValueError):
    """Invalid argument combination (bad spec string, out-of-range axis, ...)."""


class ConstructionError(StabgridError):
    """A construction rule could not be satisfied (circuit assignment,
    disentangler target overlap, ...)."""


class ResourceError(StabgridError):
    """A configured resource cap (qubit count, config count) was exceeded."""


class PhaseError(StabgridError):
    """A Pauli product would leave the real +1-phase sector."""
