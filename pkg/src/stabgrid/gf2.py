"""Dense GF(2) linear algebra on bit-packed matrices.

Rows are stored as uint64 words, 64 columns per word, column j in word
j >> 6 at bit j & 63.  Pad bits beyond ncols are kept at zero — every
constructor enforces it and the kernels preserve it.

The canonical form used throughout is the reduced row echelon form with
pivot columns strictly increasing and zero rows removed; two matrices span
the same row space iff their canonical forms are entrywise equal.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .backend import get_kernels
from .errors import DomainError


def words_for(ncols: int) -> int:
    return max(1, (ncols + 63) >> 6)


def pack_int(value: int, ncols: int) -> np.ndarray:
    """One Python-int bit vector -> packed uint64 row (little-endian bits)."""
    if value < 0 or value >> ncols:
        raise DomainError(f"value does not fit in {ncols} bits")
    nw = words_for(ncols)
    return np.frombuffer(value.to_bytes(nw * 8, "little"), dtype="<u8").astype(np.uint64)


def unpack_int(row: np.ndarray) -> int:
    return int.from_bytes(np.ascontiguousarray(row, dtype="<u8").tobytes(), "little")


class BitMatrix:
    """A (possibly empty) GF(2) matrix with packed uint64 rows."""

    __slots__ = ("nrows", "ncols", "data")

    def __init__(self, nrows: int, ncols: int, data: np.ndarray | None = None):
        if nrows < 0 or ncols < 0:
            raise DomainError("matrix dimensions must be nonnegative")
        self.nrows = nrows
        self.ncols = ncols
        nw = words_for(ncols)
        if data is None:
            data = np.zeros((nrows, nw), dtype=np.uint64)
        if data.shape != (nrows, nw):
            raise DomainError(f"packed data shape {data.shape} != {(nrows, nw)}")
        self.data = data

    @classmethod
    def from_int_rows(cls, rows: Sequence[int], ncols: int) -> "BitMatrix":
        data = np.zeros((len(rows), words_for(ncols)), dtype=np.uint64)
        for i, v in enumerate(rows):
            data[i] = pack_int(v, ncols)
        return cls(len(rows), ncols, data)

    @classmethod
    def from_bool_rows(cls, rows: Iterable[Sequence[int]], ncols: int) -> "BitMatrix":
        ints = []
        for row in rows:
            if len(row) != ncols:
                raise DomainError("row length mismatch")
            ints.append(sum(1 << j for j, b in enumerate(row) if b))
        return cls.from_int_rows(ints, ncols)

    def int_rows(self) -> list[int]:
        return [unpack_int(self.data[i]) for i in range(self.nrows)]

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.nrows, self.ncols, self.data.copy())

    def get(self, i: int, j: int) -> int:
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise DomainError("index out of range")
        return int((self.data[i, j >> 6] >> np.uint64(j & 63)) & np.uint64(1))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return (
            self.nrows == other.nrows
            and self.ncols == other.ncols
            and bool(np.array_equal(self.data, other.data))
        )

    def __repr__(self) -> str:
        return f"BitMatrix({self.nrows}x{self.ncols})"


def rref(m: BitMatrix) -> BitMatrix:
    """Canonical reduced row echelon form, zero rows dropped."""
    work = m.data.copy()
    r = int(get_kernels().rref_inplace(work, m.ncols)) if m.nrows else 0
    return BitMatrix(r, m.ncols, work[:r].copy())


def rank(m: BitMatrix) -> int:
    return rref(m).nrows


def row_space_equal(a: BitMatrix, b: BitMatrix) -> bool:
    """Whether two matrices span the same row space.

    Comparing different column counts is a usage error, not inequality.
    """
    if a.ncols != b.ncols:
        raise DomainError(f"column mismatch: {a.ncols} != {b.ncols}")
    return rref(a) == rref(b)


def in_row_space(v: int, m: BitMatrix) -> bool:
    """Whether the bit vector ``v`` lies in the row space of ``m``."""
    base = rref(m)
    stacked = np.vstack([base.data, pack_int(v, m.ncols)[None, :]])
    r = int(get_kernels().rref_inplace(stacked, m.ncols))
    return r == base.nrows


def stack(mats: Sequence[BitMatrix]) -> BitMatrix:
    """Vertically stack matrices with identical column counts."""
    if not mats:
        raise DomainError("nothing to stack")
    ncols = mats[0].ncols
    for m in mats:
        if m.ncols != ncols:
            raise DomainError("column mismatch in stack")
    data = np.vstack([m.data for m in mats]) if mats else None
    return BitMatrix(sum(m.nrows for m in mats), ncols, data)
