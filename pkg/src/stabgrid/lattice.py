"""Hypercubic lattice geometry in doubled-integer coordinates.

A D-dimensional hypercubic lattice with L_i unit cells per axis hosts
n-dimensional cells ("n-cubes"): vertices (n=0), links (n=1), plaquettes
(n=2), and so on.  An n-cube is addressed by the coordinates of its center.
Centers have half-integer entries exactly on the n axes the cube extends
along, so we store *doubled* integer coordinates: an odd entry marks a
half-integer axis, an even entry an integer one.  The number of odd entries
of a coordinate tuple is the cube's dimension.

With periodic boundary conditions the doubled coordinate along axis i lives
in [0, 2*L_i) and all distances use the minimal image.  With open boundary
conditions the vertices are 0..L_i-1 (doubled 0..2L_i-2) and cubes whose
body would stick out past the last vertex are dropped.

Distance between cube centers is the L1 norm of the doubled difference.  Two
cubes of dimensions m != n are *nearest* when that distance is |m - n| (the
smaller cube sits on the larger one's boundary as close as possible); two
cubes of equal dimension are nearest at distance 2 (doubled), i.e. half a
lattice spacing of separation.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DomainError

# A cube center in doubled integer coordinates.
CubeCoord = tuple[int, ...]

PERIODIC = "periodic"
OPEN = "open"

_LATTICE_RE = re.compile(r"^(\d+(?:x\d+)*):(pbc|obc)$")


@dataclass(frozen=True)
class LatticeSpec:
    """Shape and boundary condition of a hypercubic lattice."""

    dims: tuple[int, ...]
    bc: str = PERIODIC

    def __post_init__(self) -> None:
        if len(self.dims) < 2:
            raise DomainError(f"need at least 2 axes, got dims={self.dims}")
        if any(L < 2 for L in self.dims):
            raise DomainError(f"every axis needs L >= 2, got dims={self.dims}")
        if self.bc not in (PERIODIC, OPEN):
            raise DomainError(f"unknown boundary condition {self.bc!r}")

    @property
    def ndim(self) -> int:
        return len(self.dims)

    @property
    def periodic(self) -> bool:
        return self.bc == PERIODIC

    def __str__(self) -> str:
        return format_lattice(self)


def parse_lattice(text: str) -> LatticeSpec:
    """Parse ``"<L1>x<L2>x...x<LD>:<pbc|obc>"`` into a LatticeSpec."""
    m = _LATTICE_RE.match(text.strip())
    if not m:
        raise DomainError(f"cannot parse lattice {text!r}")
    dims = tuple(int(t) for t in m.group(1).split("x"))
    bc = PERIODIC if m.group(2) == "pbc" else OPEN
    return LatticeSpec(dims, bc)


def format_lattice(lat: LatticeSpec) -> str:
    return "x".join(str(L) for L in lat.dims) + (":pbc" if lat.periodic else ":obc")


def cube_dim(c: CubeCoord) -> int:
    """Dimension of the cube = number of half-integer (odd doubled) axes."""
    return sum(v & 1 for v in c)


def half_axes(c: CubeCoord) -> tuple[int, ...]:
    """Axes along which the cube extends (odd doubled entries)."""
    return tuple(i for i, v in enumerate(c) if v & 1)


def canonical(c: Sequence[int], lat: LatticeSpec) -> CubeCoord:
    """Reduce doubled coordinates into the fundamental domain.

    Periodic: entrywise mod 2*L_i.  Open: entries must already lie in range
    (integers 0..2L-2, halves 1..2L-3); out-of-range raises DomainError.
    """
    if lat.periodic:
        return tuple(v % (2 * L) for v, L in zip(c, lat.dims))
    out = tuple(c)
    for v, L in zip(out, lat.dims):
        hi = 2 * L - 3 if v & 1 else 2 * L - 2
        if not (0 <= v <= hi):
            raise DomainError(f"coordinate {out} outside open lattice {lat}")
    return out


def validate_cube(c: CubeCoord, lat: LatticeSpec) -> CubeCoord:
    if len(c) != lat.ndim:
        raise DomainError(f"coordinate {c} has wrong arity for {lat}")
    return canonical(c, lat)


def axis_positions(lat: LatticeSpec, axis: int, half: bool) -> range:
    """Valid doubled positions along one axis, half-integer or integer."""
    L = lat.dims[axis]
    if lat.periodic:
        return range(1, 2 * L, 2) if half else range(0, 2 * L, 2)
    return range(1, 2 * L - 2, 2) if half else range(0, 2 * L - 1, 2)


def enumerate_cubes(lat: LatticeSpec, n: int) -> list[CubeCoord]:
    """All n-cubes of the lattice, lexicographically sorted.

    Periodic count: C(D, n) * prod_i L_i.
    """
    D = lat.ndim
    if not (0 <= n <= D):
        raise DomainError(f"cube dimension {n} out of range for D={D}")
    cubes: list[CubeCoord] = []
    for axes in itertools.combinations(range(D), n):
        ranges = [axis_positions(lat, i, half=(i in axes)) for i in range(D)]
        cubes.extend(itertools.product(*ranges))
    cubes.sort()
    return cubes


def minimal_delta(a: CubeCoord, b: CubeCoord, lat: LatticeSpec) -> tuple[int, ...]:
    """Per-axis absolute doubled difference, minimal image under pbc."""
    out = []
    for va, vb, L in zip(a, b, lat.dims):
        d = abs(va - vb)
        if lat.periodic:
            d = min(d, 2 * L - d)
        out.append(d)
    return tuple(out)


def distance(a: CubeCoord, b: CubeCoord, lat: LatticeSpec) -> int:
    """Doubled L1 distance between cube centers (minimal image under pbc)."""
    return sum(minimal_delta(a, b, lat))


def is_nearest(a: CubeCoord, b: CubeCoord, lat: LatticeSpec) -> bool:
    """Nearest-neighbor relation between an m-cube and an n-cube.

    m != n: centers at doubled distance |m - n| (the cubes are incident and
    maximally close).  m == n: doubled distance exactly 2.
    """
    m, n = cube_dim(a), cube_dim(b)
    d = distance(a, b, lat)
    return d == abs(m - n) if m != n else d == 2


def nearest_cubes(c: CubeCoord, m: int, lat: LatticeSpec) -> list[CubeCoord]:
    """All m-cubes nearest to cube ``c``, sorted.

    Constructed directly: for m > n extend by m-n new half axes (one doubled
    unit either way each); for m < n round n-m half axes to either adjacent
    integer; for m == n either slide one axis by a full unit or trade one
    half axis for another.  Results are canonicalized and deduplicated, which
    matters on small periodic lattices.  Open boundaries drop out-of-range
    candidates.
    """
    D = lat.ndim
    n = cube_dim(c)
    if not (0 <= m <= D):
        raise DomainError(f"cube dimension {m} out of range for D={D}")
    H = half_axes(c)
    comp = tuple(i for i in range(D) if i not in H)
    raw: list[tuple[int, ...]] = []

    def offsets(axes: Iterable[int]) -> Iterable[tuple[int, ...]]:
        axes = tuple(axes)
        for signs in itertools.product((-1, 1), repeat=len(axes)):
            yield tuple(s for s in signs)

    if m > n:
        for axes in itertools.combinations(comp, m - n):
            for signs in offsets(axes):
                v = list(c)
                for ax, s in zip(axes, signs):
                    v[ax] += s
                raw.append(tuple(v))
    elif m < n:
        for axes in itertools.combinations(H, n - m):
            for signs in offsets(axes):
                v = list(c)
                for ax, s in zip(axes, signs):
                    v[ax] += s
                raw.append(tuple(v))
    else:
        for ax in range(D):
            for s in (-2, 2):
                v = list(c)
                v[ax] += s
                raw.append(tuple(v))
        for lose in H:
            for gain in comp:
                for s1 in (-1, 1):
                    for s2 in (-1, 1):
                        v = list(c)
                        v[lose] += s1
                        v[gain] += s2
                        raw.append(tuple(v))

    out: set[CubeCoord] = set()
    for v in raw:
        try:
            out.add(canonical(v, lat))
        except DomainError:
            continue  # fell off an open boundary
    return sorted(out)


def shifted(c: CubeCoord, axis: int, doubled_amount: int, lat: LatticeSpec) -> CubeCoord:
    v = list(c)
    v[axis] += doubled_amount
    return canonical(v, lat)


class QubitIndexMap:
    """Bijection between the n-cubes of a lattice and contiguous indices.

    Cubes are indexed in lexicographic coordinate order, so indices are
    reproducible across runs and processes.
    """

    def __init__(self, lat: LatticeSpec, n: int):
        self.lat = lat
        self.n = n
        self.cubes: list[CubeCoord] = enumerate_cubes(lat, n)
        self._index: dict[CubeCoord, int] = {c: i for i, c in enumerate(self.cubes)}

    def __len__(self) -> int:
        return len(self.cubes)

    def index(self, c: CubeCoord) -> int:
        c = canonical(c, self.lat)
        try:
            return self._index[c]
        except KeyError:
            raise DomainError(f"{c} is not a {self.n}-cube of {self.lat}") from None

    def cube(self, i: int) -> CubeCoord:
        return self.cubes[i]

    def __contains__(self, c: CubeCoord) -> bool:
        return c in self._index


def coord_text(c: CubeCoord) -> str:
    """Render doubled coordinates as humans write them: ``(0,1/2,3)``."""
    parts = [f"{v // 2}" if v % 2 == 0 else f"{v}/2" for v in c]
    return "(" + ",".join(parts) + ")"
