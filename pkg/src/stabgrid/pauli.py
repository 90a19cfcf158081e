"""Pauli strings on indexed qubits and CNOT circuit conjugation.

A Pauli string is stored as two bit vectors over the qubit index space:
``x_bits`` marks qubits carrying an X factor, ``z_bits`` those carrying Z;
a qubit with both bits set carries Y (never produced by the CSS models
here, but supported).  Only the real +1 phase sector is representable: the
``sign`` field exists so invariants can assert it stays +1.

Conjugation by CNOT(control, target) acts on the bit vectors as

    x: target ^= control        (X on the control copies onto the target)
    z: control ^= target        (Z on the target copies onto the control)

and never touches the sign.  Circuits are kept as explicit gate tuples and
applied gate by gate, first listed gate first.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DomainError, PhaseError
from .gf2 import BitMatrix


def _parity(v: int) -> int:
    return v.bit_count() & 1


@dataclass(frozen=True)
class PauliString:
    """An n-qubit Pauli operator with +1 sign, in (x|z) bit representation."""

    n: int
    x_bits: int = 0
    z_bits: int = 0
    sign: int = 1

    def __post_init__(self) -> None:
        if self.n < 0:
            raise DomainError("qubit count must be nonnegative")
        if self.x_bits >> self.n or self.z_bits >> self.n:
            raise DomainError("bit vector exceeds qubit count")
        if self.x_bits < 0 or self.z_bits < 0:
            raise DomainError("bit vectors must be nonnegative")
        if self.sign != 1:
            raise PhaseError("only the +1 phase sector is representable")

    @classmethod
    def x_on(cls, n: int, qubits) -> "PauliString":
        bits = 0
        for q in qubits:
            bits |= 1 << q
        return cls(n, x_bits=bits)

    @classmethod
    def z_on(cls, n: int, qubits) -> "PauliString":
        bits = 0
        for q in qubits:
            bits |= 1 << q
        return cls(n, z_bits=bits)

    @property
    def is_identity(self) -> bool:
        return self.x_bits == 0 and self.z_bits == 0

    def weight(self) -> int:
        return (self.x_bits | self.z_bits).bit_count()

    def x_support(self) -> tuple[int, ...]:
        return _bit_positions(self.x_bits)

    def z_support(self) -> tuple[int, ...]:
        return _bit_positions(self.z_bits)


def _bit_positions(v: int) -> tuple[int, ...]:
    out = []
    while v:
        low = v & -v
        out.append(low.bit_length() - 1)
        v ^= low
    return tuple(out)


def commutes(p: PauliString, q: PauliString) -> bool:
    """Symplectic commutation test."""
    if p.n != q.n:
        raise DomainError("qubit count mismatch")
    return (_parity(p.x_bits & q.z_bits) ^ _parity(p.z_bits & q.x_bits)) == 0


def multiply(p: PauliString, q: PauliString) -> PauliString:
    """Product pq, valid only when it stays in the +1 sector.

    Reordering the Z factors of p past the X factors of q contributes
    (-1)^|p.z & q.x|; an odd overlap would need a -1 sign and raises.
    (Y factors, carrying both bits, contribute through the same count.)
    """
    if p.n != q.n:
        raise DomainError("qubit count mismatch")
    if _parity(p.z_bits & q.x_bits):
        raise PhaseError("product would acquire a -1 phase")
    return PauliString(p.n, p.x_bits ^ q.x_bits, p.z_bits ^ q.z_bits)


def cnot_conjugate(p: PauliString, control: int, target: int) -> PauliString:
    """Image of p under conjugation by CNOT(control, target)."""
    if control == target:
        raise DomainError("control and target must differ")
    if not (0 <= control < p.n and 0 <= target < p.n):
        raise DomainError("gate qubit out of range")
    x, z = p.x_bits, p.z_bits
    if (x >> control) & 1:
        x ^= 1 << target
    if (z >> target) & 1:
        z ^= 1 << control
    return PauliString(p.n, x, z)


@dataclass(frozen=True)
class CnotCircuit:
    """An ordered list of CNOT gates on n qubits.

    The circuits built in this package are single commuting layers: no
    qubit is both a control and a target.  That property is asserted at
    construction (it makes gate order irrelevant and every gate's square
    the identity), unless ``layered=False`` opts out for ad-hoc circuits.
    """

    n: int
    gates: tuple[tuple[int, int], ...]
    layered: bool = field(default=True)

    def __post_init__(self) -> None:
        controls = set()
        targets = set()
        for c, t in self.gates:
            if c == t:
                raise DomainError(f"gate ({c},{t}) has control == target")
            if not (0 <= c < self.n and 0 <= t < self.n):
                raise DomainError(f"gate ({c},{t}) out of range for n={self.n}")
            controls.add(c)
            targets.add(t)
        if self.layered and controls & targets:
            clash = sorted(controls & targets)[:4]
            raise DomainError(f"not a commuting layer: qubits {clash} are both control and target")
        if len(set(self.gates)) != len(self.gates):
            raise DomainError("duplicate gate in circuit")

    def __len__(self) -> int:
        return len(self.gates)


def circuit_conjugate(p: PauliString, circuit: CnotCircuit) -> PauliString:
    if p.n != circuit.n:
        raise DomainError("qubit count mismatch")
    x, z = p.x_bits, p.z_bits
    for c, t in circuit.gates:
        if (x >> c) & 1:
            x ^= 1 << t
        if (z >> t) & 1:
            z ^= 1 << c
    return PauliString(p.n, x, z)


def conjugate_group(paulis, circuit: CnotCircuit) -> list[PauliString]:
    """Conjugate a list of Pauli strings by the same circuit."""
    return [circuit_conjugate(p, circuit) for p in paulis]


def symplectic_matrix(paulis, n: int) -> BitMatrix:
    """Stack (x|z) rows: columns [0, n) = X sector, [n, 2n) = Z sector."""
    rows = [p.x_bits | (p.z_bits << n) for p in paulis]
    return BitMatrix.from_int_rows(rows, 2 * n)
