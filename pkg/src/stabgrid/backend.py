"""Kernel backend selection.

Hot inner loops (GF(2) elimination, coarse-graining transforms) exist twice:
a numba-jitted version and a pure-numpy fallback with identical semantics.
The env flag ``STABGRID_BACKEND`` picks one:

    STABGRID_BACKEND=numba   require numba (ImportError if unavailable)
    STABGRID_BACKEND=numpy   force the pure-numpy path
    STABGRID_BACKEND=auto    numba when importable, else numpy (default)

Resolution is lazy (first kernel use) so importing stabgrid stays cheap, and
``set_backend`` lets tests and benchmarks switch explicitly.
"""

from __future__ import annotations

import os
from types import ModuleType

from .errors import DomainError

_CHOICES = ("auto", "numba", "numpy")
_active: ModuleType | None = None


def _load(name: str) -> ModuleType:
    if name == "numpy":
        from . import _kernels_numpy

        return _kernels_numpy
    if name == "numba":
        from . import _kernels_numba

        return _kernels_numba
    if name == "auto":
        try:
            from . import _kernels_numba

            return _kernels_numba
        except ImportError:
            from . import _kernels_numpy

            return _kernels_numpy
    raise DomainError(f"STABGRID_BACKEND must be one of {_CHOICES}, got {name!r}")


def get_kernels() -> ModuleType:
    """The active kernel module (resolving the env flag on first use)."""
    global _active
    if _active is None:
        _active = _load(os.environ.get("STABGRID_BACKEND", "auto").strip().lower() or "auto")
    return _active


def active_backend() -> str:
    return get_kernels().NAME


def set_backend(name: str) -> str:
    """Explicitly select a backend ('numba', 'numpy', or 'auto'). Returns the
    resolved backend name."""
    global _active
    _active = _load(name)
    return _active.NAME
