"""One coarse-graining step for the two-dimensional toric-code model.

Pipeline on an L x L periodic lattice with spins on links:

1. Enumerate the ground-state configuration group of the [0,1,2,2] model.
2. ``add_sublattice_qubits_and_u1``: adjoin one fresh bit per vertex and,
   with link-controlled CNOTs, set it to up XOR left on the even
   checkerboard sublattice (x + y even) and up XOR right on the odd one.
3. ``apply_u2``: on every *shrinking* square (the plaquettes with x + y
   odd), apply the 8-spin disentangler U_s: its four corner vertex bits
   select, through a fixed 16-entry table, which of its four edge links to
   flip.  After this layer every shrinking square's links carry a pure GHZ
   pattern (all four bits equal in every configuration) and the vertex bits
   alone realize the model on the coarse (45-degree rotated, sqrt(2)
   spacing) lattice whose plaquettes are the kept squares (x + y even).
4. ``verify_coarse_structure`` checks both statements by enumeration.

The shrinking squares tile the links only when L is even: each link must
border exactly one shrinking square, which forces the checkerboard and
needs L*L/2 squares — impossible for odd L (2L^2 links are not divisible
by 4 at L = 3, and the checkerboard is inconsistent around an odd cycle).
On odd L the target sets collide and ``apply_u2`` raises ConstructionError.

Square geometry and labels, for square s(x, y) with corners SW=(x, y),
NW=(x, y+1), NE=(x+1, y+1), SE=(x+1, y): controls (a, b, c, d) =
(SW, NW, NE, SE) vertex bits, targets (i, j, k, l) = (left, top, right,
bottom) edge links, interleaved clockwise as a-i-b-j-c-k-d-l.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import gf2
from .backend import get_kernels
from .errors import ConstructionError, DomainError, ResourceError
from .groundstate import DEFAULT_MAX_CONFIGS, ConfigGroup, config_group, enumerate_configs
from .lattice import LatticeSpec, QubitIndexMap
from .models import ModelSpec, build_model

MAX_L = 5  # beyond this the enumeration is out of reach by design

# Control pattern (bits a|b<<1|c<<2|d<<3) -> target flip mask (i|j<<1|k<<2|l<<3).
# Even-weight patterns only; odd-weight patterns cannot occur on a valid
# refined configuration and map to 0 here (apply_u2 flags them).
_A, _B, _C, _D = 1, 2, 4, 8
_I, _J, _K, _L = 1, 2, 4, 8
DEFAULT_TABLE = np.zeros(16, dtype=np.uint8)
DEFAULT_TABLE[_A | _B] = _I
DEFAULT_TABLE[_B | _C] = _J
DEFAULT_TABLE[_C | _D] = _K
DEFAULT_TABLE[_A | _D] = _I | _J | _K
DEFAULT_TABLE[_A | _C] = _I | _J
DEFAULT_TABLE[_B | _D] = _J | _K
DEFAULT_TABLE[_A | _B | _C | _D] = _I | _K


@dataclass(frozen=True)
class UsTable:
    """The per-square disentangler, as a 16-entry control->flip table."""

    table: tuple[int, ...] = tuple(int(v) for v in DEFAULT_TABLE)

    def __post_init__(self) -> None:
        if len(self.table) != 16 or any(not (0 <= v < 16) for v in self.table):
            raise DomainError("table must map 16 control patterns to 4-bit masks")

    def as_array(self) -> np.ndarray:
        return np.asarray(self.table, dtype=np.uint8)

    def apply_once(self, state: int) -> int:
        """Act on an 8-bit state (controls low nibble, targets high)."""
        return state ^ (self.table[state & 15] << 4)

    def is_involution(self) -> bool:
        return all(self.apply_once(self.apply_once(s)) == s for s in range(256))

    def fixes_zero(self) -> bool:
        return self.table[0] == 0

    def all_ones_mask(self) -> int:
        return self.table[15]

    def odd_patterns_inert(self) -> bool:
        return all(self.table[p] == 0 for p in range(16) if bin(p).count("1") % 2)


def _toric_spec() -> ModelSpec:
    return ModelSpec(0, 1, 2, 2)


def _vertex_list(L: int) -> list[tuple[int, int]]:
    lat = LatticeSpec((L, L))
    return [c for c in QubitIndexMap(lat, 0).cubes]  # lex-sorted doubled coords


def _link_col(qmap: QubitIndexMap, doubled: tuple[int, int]) -> int:
    return qmap.index(doubled)


def _u1_control_pairs(L: int, qmap: QubitIndexMap) -> np.ndarray:
    """For each vertex (lex order): the two link columns XORed into its bit."""
    pairs = []
    for vx, vy in _vertex_list(L):
        x, y = vx // 2, vy // 2
        up = qmap.index(((2 * x) % (2 * L), (2 * y + 1) % (2 * L)))
        if (x + y) % 2 == 0:
            side = qmap.index(((2 * x - 1) % (2 * L), (2 * y) % (2 * L)))  # left
        else:
            side = qmap.index(((2 * x + 1) % (2 * L), (2 * y) % (2 * L)))  # right
        pairs.append((up, side))
    return np.asarray(pairs, dtype=np.int64)


def add_sublattice_qubits_and_u1(configs: np.ndarray, L: int) -> np.ndarray:
    """Adjoin vertex bits (columns 2L^2 ..< 3L^2) set to up XOR left on the
    even sublattice and up XOR right on the odd one."""
    lat = LatticeSpec((L, L))
    qmap = QubitIndexMap(lat, 1)
    n_links = len(qmap)
    n_total = n_links + L * L
    words = gf2.words_for(n_total)
    out = np.zeros((configs.shape[0], words), dtype=np.uint64)
    out[:, : configs.shape[1]] = configs
    pairs = _u1_control_pairs(L, qmap)
    get_kernels().extend_vertex_bits(out, out, pairs, n_links)
    return out


def _shrinking_squares(L: int) -> list[tuple[int, int]]:
    return [(x, y) for x in range(L) for y in range(L) if (x + y) % 2 == 1]


def _kept_squares(L: int) -> list[tuple[int, int]]:
    return [(x, y) for x in range(L) for y in range(L) if (x + y) % 2 == 0]


def _square_columns(L: int, squares: list[tuple[int, int]]) -> tuple[np.ndarray, np.ndarray]:
    """(controls, targets) column tables, one row of 4 per square.

    Controls: corner vertex bits (a, b, c, d) = (SW, NW, NE, SE).
    Targets: edge links (i, j, k, l) = (left, top, right, bottom).
    """
    lat = LatticeSpec((L, L))
    qmap = QubitIndexMap(lat, 1)
    n_links = len(qmap)
    vidx = {c: i for i, c in enumerate(_vertex_list(L))}

    def vcol(x: int, y: int) -> int:
        return n_links + vidx[((2 * x) % (2 * L), (2 * y) % (2 * L))]

    ctrl = np.zeros((len(squares), 4), dtype=np.int64)
    tgt = np.zeros((len(squares), 4), dtype=np.int64)
    for s, (x, y) in enumerate(squares):
        ctrl[s] = (vcol(x, y), vcol(x, y + 1), vcol(x + 1, y + 1), vcol(x + 1, y))
        tgt[s] = (
            qmap.index(((2 * x) % (2 * L), (2 * y + 1) % (2 * L))),  # left
            qmap.index(((2 * x + 1) % (2 * L), (2 * y + 2) % (2 * L))),  # top
            qmap.index(((2 * x + 2) % (2 * L), (2 * y + 1) % (2 * L))),  # right
            qmap.index(((2 * x + 1) % (2 * L), (2 * y) % (2 * L))),  # bottom
        )
    return ctrl, tgt


def apply_u2(configs: np.ndarray, L: int, table: Optional[UsTable] = None) -> np.ndarray:
    """Apply the disentangler on every shrinking square, in place.

    The squares' target sets must tile the links disjointly; a collision
    (any link adjacent to two shrinking squares, as happens for odd L)
    raises ConstructionError before anything is modified.
    """
    table = table or UsTable()
    squares = _shrinking_squares(L)
    ctrl, tgt = _square_columns(L, squares)
    flat = tgt.ravel().tolist()
    if len(set(flat)) != len(flat):
        dup = sorted({v for v in flat if flat.count(v) > 1})[:4]
        raise ConstructionError(
            f"shrinking squares overlap on link columns {dup} (L={L} has no disjoint tiling)"
        )
    bad = int(get_kernels().apply_square_table(configs, ctrl, tgt, table.as_array()))
    if bad:
        raise ConstructionError("odd-weight control pattern encountered on a refined configuration")
    return configs


def refined_configs(L: int, max_configs: int = DEFAULT_MAX_CONFIGS) -> np.ndarray:
    """Ground configurations of the L x L model, with vertex bits adjoined."""
    if L > MAX_L:
        raise ResourceError(f"L={L} beyond the supported enumeration bound {MAX_L}")
    lat = LatticeSpec((L, L))
    model = build_model(_toric_spec(), lat)
    group = config_group(model)
    configs = enumerate_configs(group, max_configs)
    return add_sublattice_qubits_and_u1(configs, L)


def _coarse_group(L: int, max_configs: int) -> np.ndarray:
    """Configurations of the coarse model: vertex-bit flips of kept squares."""
    vidx = {c: i for i, c in enumerate(_vertex_list(L))}
    masks = []
    for x, y in _kept_squares(L):
        m = 0
        for cx, cy in ((x, y), (x, y + 1), (x + 1, y + 1), (x + 1, y)):
            m |= 1 << vidx[((2 * cx) % (2 * L), (2 * cy) % (2 * L))]
        masks.append(m)
    basis = gf2.rref(gf2.BitMatrix.from_int_rows(masks, L * L))
    group = ConfigGroup(L * L, 0, tuple(basis.int_rows()))
    return enumerate_configs(group, max_configs)


def _project_vertices(configs: np.ndarray, L: int) -> np.ndarray:
    """Drop link columns; repack the L^2 vertex bits as fresh rows."""
    n_links = 2 * L * L
    out = np.zeros((configs.shape[0], gf2.words_for(L * L)), dtype=np.uint64)
    for v in range(L * L):
        col = n_links + v
        bits = (configs[:, col >> 6] >> np.uint64(col & 63)) & np.uint64(1)
        out[:, v >> 6] |= bits << np.uint64(v & 63)
    return out


def verify_coarse_structure(
    L: int, max_configs: int = DEFAULT_MAX_CONFIGS, table: Optional[UsTable] = None
) -> dict:
    """Run the full pipeline and check the two structural claims.

    ghz_ok: in every disentangled configuration, every shrinking square's
    four links agree.  coarse_equal_ok: the vertex-bit patterns, as a set,
    equal the coarse model's configuration group.
    """
    configs = refined_configs(L, max_configs)
    apply_u2(configs, L, table)
    _, tgt = _square_columns(L, _shrinking_squares(L))
    ghz = bool(get_kernels().ghz_aligned(configs, tgt))
    projected = np.unique(_project_vertices(configs, L), axis=0)
    coarse = np.unique(_coarse_group(L, max_configs), axis=0)
    equal = projected.shape == coarse.shape and bool(np.array_equal(projected, coarse))
    return {
        "L": L,
        "n_configs": int(configs.shape[0]),
        "ghz_ok": ghz,
        "coarse_equal_ok": equal,
    }
