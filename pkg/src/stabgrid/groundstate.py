"""Ground-state spin configurations in the Z basis.

For the CSS models here a Z-basis product state |config> satisfies every
Z-type constraint exactly when the configuration's overlap with each B
support is even, and the A terms act on such states by flipping their
support.  The ground space is therefore described by a *configuration
group*: a GF(2) coset (offset + span of the A-term flip patterns), with the
all-zeros configuration always a member for these models.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gf2
from .errors import ResourceError
from .models import StabilizerModel
from .pauli import _parity

DEFAULT_MAX_CONFIGS = 1 << 20


@dataclass(frozen=True)
class ConfigGroup:
    """Coset offset + basis (canonical RREF rows) over n_qubits bits."""

    n_qubits: int
    offset: int
    basis: tuple[int, ...]

    @property
    def log2_size(self) -> int:
        return len(self.basis)


def config_group(model: StabilizerModel) -> ConfigGroup:
    """The group of Z-basis ground configurations reachable from all-zeros.

    Basis = canonical row reduction of the A-term flip patterns (x bits).
    """
    flips = [op.x_bits for tag, op in model.generators if op.x_bits]
    mat = gf2.rref(gf2.BitMatrix.from_int_rows(flips, model.n_qubits))
    return ConfigGroup(model.n_qubits, 0, tuple(mat.int_rows()))


def check_b_constraints(config: int, model: StabilizerModel) -> bool:
    """Whether a configuration has even overlap with every Z-type generator."""
    for _, op in model.generators:
        if op.z_bits and _parity(config & op.z_bits):
            return False
    return True


def enumerate_configs(group: ConfigGroup, max_configs: int = DEFAULT_MAX_CONFIGS) -> np.ndarray:
    """Expand the coset into explicit packed configurations.

    Returns a (2**k, words) uint64 array in deterministic order (Gray-free
    doubling: row index bit i selects basis vector i).  Exceeding
    ``max_configs`` raises ResourceError.
    """
    k = len(group.basis)
    if 1 << k > max_configs:
        raise ResourceError(f"2^{k} configurations exceed the cap {max_configs}")
    words = gf2.words_for(group.n_qubits)
    out = np.zeros((1 << k, words), dtype=np.uint64)
    out[0] = gf2.pack_int(group.offset, group.n_qubits)
    size = 1
    for v in group.basis:
        row = gf2.pack_int(v, group.n_qubits)
        out[size : 2 * size] = out[:size] ^ row
        size *= 2
    return out


def config_ints(configs: np.ndarray) -> list[int]:
    """Packed rows -> Python ints (handy in tests and small reports)."""
    return [gf2.unpack_int(configs[i]) for i in range(configs.shape[0])]
