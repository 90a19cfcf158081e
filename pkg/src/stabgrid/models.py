"""CSS stabilizer models on hypercubic lattices.

A model family is labelled by four integers ``[d_n, d_s, d_l, D]`` with
d_n < d_s < d_l <= D: spins sit on the d_s-cubes of a D-dimensional lattice,
an X-type *A term* sits on every D-cube (acting on all nearest d_s-cubes),
and a Z-type *B term* sits on every d_n-cube, one per *subsystem* — a choice
of d_l axes containing the base cube's half axes — acting on the nearest
d_s-cubes inside that subsystem.  For the [d, d+1, d+2, D] family every
B term has weight exactly 4.

The ground-state degeneracy is read off the stabilizer group: with N spins
and generator matrix G (stacked (x|z) rows), log2 GSD = N - rank(G).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from . import gf2
from .backend import get_kernels
from .errors import DomainError
from .lattice import (
    CubeCoord,
    LatticeSpec,
    QubitIndexMap,
    canonical,
    cube_dim,
    coord_text,
    enumerate_cubes,
    format_lattice,
    half_axes,
    parse_lattice,
)
from .pauli import PauliString, symplectic_matrix

_SPEC_RE = re.compile(r"^\[(\d+),(\d+),(\d+),(\d+)\]$")


@dataclass(frozen=True)
class ModelSpec:
    """The four defining integers of a model family."""

    dn: int
    ds: int
    dl: int
    D: int

    def __post_init__(self) -> None:
        if not (0 <= self.dn < self.ds < self.dl <= self.D):
            raise DomainError(f"need 0 <= d_n < d_s < d_l <= D, got {self}")
        if self.D < 2:
            raise DomainError("need D >= 2")

    def __str__(self) -> str:
        return f"[{self.dn},{self.ds},{self.dl},{self.D}]"


def parse_model_spec(text: str) -> ModelSpec:
    m = _SPEC_RE.match(text.strip())
    if not m:
        raise DomainError(f"cannot parse model spec {text!r}")
    return ModelSpec(*(int(g) for g in m.groups()))


def parse_model(text: str) -> tuple[ModelSpec, LatticeSpec]:
    """Parse ``"[dn,ds,dl,D]@<L1>x...x<LD>:<pbc|obc>"``."""
    head, sep, tail = text.strip().partition("@")
    if not sep:
        raise DomainError(f"cannot parse model string {text!r} (missing '@')")
    spec = parse_model_spec(head)
    lat = parse_lattice(tail)
    if lat.ndim != spec.D:
        raise DomainError(f"lattice {lat} has {lat.ndim} axes, spec {spec} wants {spec.D}")
    return spec, lat


@dataclass(frozen=True)
class Tag:
    """Provenance of a generator: term family, base cube, subsystem axes."""

    kind: str  # "A" | "B" | "ZZ" | "inserted-A" | "inserted-B"
    cube: CubeCoord
    axes: Optional[tuple[int, ...]] = None

    def __str__(self) -> str:
        s = f"{self.kind}@{coord_text(self.cube)}"
        if self.axes is not None:
            s += "|" + "".join(str(a + 1) for a in self.axes)
        return s


class StabilizerModel:
    """A concrete stabilizer model: lattice, qubit map, tagged generators."""

    def __init__(
        self,
        lat: LatticeSpec,
        spec: Optional[ModelSpec],
        qubit_cube_dim: int,
        generators: Sequence[tuple[Tag, PauliString]],
        note: str = "",
    ):
        self.lat = lat
        self.spec = spec
        self.qubit_cube_dim = qubit_cube_dim
        self.qubits = QubitIndexMap(lat, qubit_cube_dim)
        self.generators = list(generators)
        self.note = note

    @property
    def n_qubits(self) -> int:
        return len(self.qubits)

    def paulis(self) -> list[PauliString]:
        return [op for _, op in self.generators]

    def by_kind(self, *kinds: str) -> list[tuple[Tag, PauliString]]:
        return [(t, op) for t, op in self.generators if t.kind in kinds]

    def find(self, kind: str, cube: CubeCoord, axes: Optional[tuple[int, ...]] = None):
        cube = canonical(cube, self.lat)
        for t, op in self.generators:
            if t.kind == kind and t.cube == cube and (axes is None or t.axes == axes):
                return t, op
        raise DomainError(f"no generator {kind}@{coord_text(cube)} axes={axes}")

    def matrix(self) -> gf2.BitMatrix:
        return symplectic_matrix(self.paulis(), self.n_qubits)

    def __repr__(self) -> str:
        return (
            f"StabilizerModel(spec={self.spec}, lat={self.lat}, "
            f"qubits={self.n_qubits}, generators={len(self.generators)})"
        )


def incident_cubes(
    center: CubeCoord, target_dim: int, axes_pool: Iterable[int], lat: LatticeSpec
) -> list[CubeCoord]:
    """Nearest ``target_dim``-cubes reached from ``center`` by half-step moves
    on axes drawn from ``axes_pool``.

    Going up in dimension the moved axes become half axes; going down they
    are rounded to either adjacent integer.  On open lattices, moves that
    cross the boundary are dropped.
    """
    n = cube_dim(center)
    k = abs(target_dim - n)
    out: list[CubeCoord] = []
    for axes in itertools.combinations(tuple(axes_pool), k):
        for signs in itertools.product((-1, 1), repeat=k):
            v = list(center)
            for ax, s in zip(axes, signs):
                v[ax] += s
            try:
                out.append(canonical(v, lat))
            except DomainError:
                continue
    return out


def a_term_support(g: CubeCoord, ds: int, lat: LatticeSpec) -> list[CubeCoord]:
    """Spins of the A term at a D-cube: all nearest d_s-cubes."""
    return incident_cubes(g, ds, half_axes(g), lat)


def b_term_support(
    g: CubeCoord, ds: int, subsystem: tuple[int, ...], lat: LatticeSpec
) -> list[CubeCoord]:
    """Spins of the B term at ``g`` restricted to ``subsystem``: the nearest
    d_s-cubes whose half axes stay inside the subsystem."""
    extra = tuple(a for a in subsystem if a not in half_axes(g))
    return incident_cubes(g, ds, extra, lat)


def subsystems_through(g: CubeCoord, dl: int, D: int) -> list[tuple[int, ...]]:
    """Axis sets of the d_l-dimensional subsystems containing cube ``g``,
    in lexicographic order."""
    H = half_axes(g)
    comp = tuple(i for i in range(D) if i not in H)
    out = []
    for extra in itertools.combinations(comp, dl - len(H)):
        out.append(tuple(sorted(H + extra)))
    return out


def build_model(spec: ModelSpec, lat: LatticeSpec) -> StabilizerModel:
    """Instantiate the model on a lattice.

    One A term per D-cube, one B term per (d_n-cube, subsystem) pair.  On an
    open lattice boundary B terms keep whichever of their spins exist.
    """
    if lat.ndim != spec.D:
        raise DomainError(f"lattice {lat} has {lat.ndim} axes, spec {spec} wants {spec.D}")
    qmap = QubitIndexMap(lat, spec.ds)
    n = len(qmap)
    gens: list[tuple[Tag, PauliString]] = []
    for g in enumerate_cubes(lat, spec.D):
        support = a_term_support(g, spec.ds, lat)
        op = PauliString.x_on(n, (qmap.index(c) for c in support))
        gens.append((Tag("A", g), op))
    for g in enumerate_cubes(lat, spec.dn):
        for sub in subsystems_through(g, spec.dl, spec.D):
            support = b_term_support(g, spec.ds, sub, lat)
            if not support:
                continue
            op = PauliString.z_on(n, (qmap.index(c) for c in support))
            gens.append((Tag("B", g, sub), op))
    return StabilizerModel(lat, spec, spec.ds, gens)


def dualize(model: StabilizerModel) -> StabilizerModel:
    """Half-unit shift duality: every coordinate moves by +1/2, cubes of
    dimension n map to cubes of dimension D - n.

    Defined for models with d_l = D on periodic lattices.  Applying it twice
    gives a unit translation of the original model (same row space).
    """
    spec = model.spec
    if spec is None or spec.dl != spec.D:
        raise DomainError("duality requires a model with d_l = D")
    if not model.lat.periodic:
        raise DomainError("duality requires periodic boundaries")
    lat = model.lat
    new_dim = spec.D - model.qubit_cube_dim
    new_qmap = QubitIndexMap(lat, new_dim)
    old_qmap = model.qubits

    def shift(c: CubeCoord) -> CubeCoord:
        return canonical(tuple(v + 1 for v in c), lat)

    remap = [new_qmap.index(shift(c)) for c in old_qmap.cubes]

    def remap_bits(bits: int) -> int:
        out = 0
        for q in range(len(old_qmap)):
            if (bits >> q) & 1:
                out |= 1 << remap[q]
        return out

    gens = []
    for tag, op in model.generators:
        new_tag = Tag(tag.kind, shift(tag.cube), tag.axes)
        gens.append((new_tag, PauliString(len(new_qmap), remap_bits(op.x_bits), remap_bits(op.z_bits))))
    return StabilizerModel(lat, spec, new_dim, gens, note="dual")


def log2_gsd(model: StabilizerModel) -> int:
    """log2 of the ground-state degeneracy: N - rank of the generator matrix."""
    return model.n_qubits - gf2.rank(model.matrix())


def verify_commutation(model: StabilizerModel, max_report: int = 8) -> list[tuple[Tag, Tag]]:
    """Exhaustive pairwise commutation check; returns offending pairs."""
    n = model.n_qubits
    ops = model.paulis()
    if not ops:
        return []
    xs = np.stack([gf2.pack_int(p.x_bits, n) for p in ops])
    zs = np.stack([gf2.pack_int(p.z_bits, n) for p in ops])
    k = get_kernels()
    pxz = k.parity_products(xs, zs)
    anti = (pxz ^ pxz.T) != 0
    bad = []
    for i, j in zip(*np.nonzero(np.triu(anti, 1))):
        bad.append((model.generators[int(i)][0], model.generators[int(j)][0]))
        if len(bad) >= max_report:
            break
    return bad


def pauli_text(p: PauliString, qmap: QubitIndexMap) -> str:
    """Canonical text form: sorted X@(coords) / Z@(coords) atoms."""
    atoms = [f"X@{coord_text(qmap.cube(q))}" for q in p.x_support()]
    atoms += [f"Z@{coord_text(qmap.cube(q))}" for q in p.z_support()]
    return " ".join(sorted(atoms)) if atoms else "I"


# ---------------------------------------------------------------------------
# Degeneracy scans and the exact size fit
# ---------------------------------------------------------------------------


@dataclass
class FitResult:
    """Exact fit of log2 GSD = c2 * sum_{i<j} L_i L_j + c1 * sum_i L_i + c0."""

    ok: bool
    c2: Optional[Fraction]
    c1: Optional[Fraction]
    c0: Optional[Fraction]
    residual_max: Fraction
    gsd_by_dims: dict[tuple[int, ...], int]


def _solve_fractions(a: list[list[Fraction]], b: list[Fraction]) -> Optional[list[Fraction]]:
    """Solve a square exact linear system; None when singular."""
    m = [row[:] + [rhs] for row, rhs in zip(a, b)]
    n = len(m)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        inv = m[col][col]
        m[col] = [v / inv for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [v - f * w for v, w in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def _fit_basis(dims: tuple[int, ...]) -> tuple[int, int, int]:
    s2 = sum(a * b for a, b in itertools.combinations(dims, 2))
    return s2, sum(dims), 1


def gsd_scan_and_fit(
    spec: ModelSpec, sizes: Sequence[tuple[int, ...]], bc: str = "periodic"
) -> FitResult:
    """Compute log2 GSD across lattice sizes and fit the size dependence.

    The fit is exact rational least squares on the basis
    [sum_{i<j} L_i L_j, sum_i L_i, 1]; coefficients are accepted only when
    every residual vanishes exactly.  A rank-deficient design (sizes that
    cannot pin all three coefficients) raises DomainError.
    """
    sizes = sorted(set(tuple(s) for s in sizes))
    if not sizes:
        raise DomainError("no sizes to scan")
    gsd_by_dims: dict[tuple[int, ...], int] = {}
    rows: list[tuple[int, int, int]] = []
    rhs: list[int] = []
    for dims in sizes:
        lat = LatticeSpec(dims, bc)
        gsd_by_dims[dims] = log2_gsd(build_model(spec, lat))
        rows.append(_fit_basis(dims))
        rhs.append(gsd_by_dims[dims])

    # Normal equations over Fraction.
    ata = [[Fraction(0)] * 3 for _ in range(3)]
    atb = [Fraction(0)] * 3
    for row, y in zip(rows, rhs):
        for i in range(3):
            for j in range(3):
                ata[i][j] += row[i] * row[j]
            atb[i] += row[i] * y
    sol = _solve_fractions(ata, atb)
    if sol is None:
        raise DomainError("size scan cannot determine all fit coefficients (underdetermined)")
    c2, c1, c0 = sol
    residuals = [c2 * r[0] + c1 * r[1] + c0 * r[2] - y for r, y in zip(rows, rhs)]
    residual_max = max((abs(r) for r in residuals), default=Fraction(0))
    return FitResult(residual_max == 0, c2, c1, c0, residual_max, gsd_by_dims)


def gsd_report(spec: ModelSpec, lat: LatticeSpec) -> dict:
    model = build_model(spec, lat)
    r = gf2.rank(model.matrix())
    return {
        "spec": str(spec),
        "dims": format_lattice(lat),
        "n_qubits": model.n_qubits,
        "rank": r,
        "log2_gsd": model.n_qubits - r,
    }
