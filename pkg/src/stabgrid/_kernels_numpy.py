"""Pure-numpy reference kernels.

Same contracts as the numba twins in ``_kernels_numba``; every function here
must stay behaviorally identical so the backends are interchangeable.  Rows
are uint64-packed bit vectors, bit j of a row living in word j >> 6 at bit
position j & 63.
"""

from __future__ import annotations

import numpy as np

NAME = "numpy"


def rref_inplace(data: np.ndarray, ncols: int) -> int:
    """Reduced row echelon form over GF(2), in place.

    Pivot policy: scan columns left to right, pick the first remaining row
    with a 1 in the column, swap it up, and clear the column everywhere else.
    Returns the rank r; on return rows [0, r) hold the canonical form and all
    later rows are zero.
    """
    nrows = data.shape[0]
    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        w = col >> 6
        mask = np.uint64(1 << (col & 63))
        colbits = (data[:, w] & mask) != 0
        pivots = np.nonzero(colbits[r:])[0]
        if pivots.size == 0:
            continue
        p = r + int(pivots[0])
        if p != r:
            data[[r, p]] = data[[p, r]]
            colbits[[r, p]] = colbits[[p, r]]
        colbits[r] = False
        if colbits.any():
            data[colbits] ^= data[r]
        r += 1
    return r


_B16 = np.unpackbits(np.arange(65536, dtype=">u2").view(np.uint8)).reshape(65536, 16).sum(
    axis=1
).astype(np.uint8)


def _popcount_u64(a: np.ndarray) -> np.ndarray:
    """Per-element popcount of a uint64 array (uint16 table lookup)."""
    v = a.view(np.uint16).reshape(a.shape + (4,))
    return _B16[v].sum(axis=-1, dtype=np.int64)


def parity_products(xs: np.ndarray, zs: np.ndarray) -> np.ndarray:
    """Overlap parities parity(popcount(x & z)) for all row pairs.

    xs: (nx, W) packed rows; zs: (nz, W).  Returns uint8 (nx, nz).
    Blocked so the temporary stays small.
    """
    nx = xs.shape[0]
    nz = zs.shape[0]
    out = np.zeros((nx, nz), dtype=np.uint8)
    step = max(1, (1 << 22) // max(1, zs.size))
    for lo in range(0, nx, step):
        hi = min(nx, lo + step)
        prod = xs[lo:hi, None, :] & zs[None, :, :]
        out[lo:hi] = (_popcount_u64(prod).sum(axis=-1) & 1).astype(np.uint8)
    return out


def get_column(configs: np.ndarray, col: int) -> np.ndarray:
    """Bit ``col`` of every packed row, as uint64 0/1."""
    w = col >> 6
    return (configs[:, w] >> np.uint64(col & 63)) & np.uint64(1)


def xor_column(configs: np.ndarray, col: int, bits: np.ndarray) -> None:
    """XOR 0/1 values into bit ``col`` of every packed row."""
    w = col >> 6
    configs[:, w] ^= bits.astype(np.uint64) << np.uint64(col & 63)


def extend_vertex_bits(
    src: np.ndarray, dst: np.ndarray, ctrl_pairs: np.ndarray, base_col: int
) -> None:
    """Append derived bits: dst bit (base_col + v) = XOR of two src columns.

    src: (n, Ws) packed inputs; dst: (n, Wd) preallocated, src words already
    copied in; ctrl_pairs: (nv, 2) int64 column indices into src.
    """
    for v in range(ctrl_pairs.shape[0]):
        bits = get_column(src, int(ctrl_pairs[v, 0])) ^ get_column(src, int(ctrl_pairs[v, 1]))
        xor_column(dst, base_col + v, bits)


def apply_square_table(
    configs: np.ndarray,
    ctrl_cols: np.ndarray,
    tgt_cols: np.ndarray,
    table: np.ndarray,
) -> int:
    """Apply the per-square disentangler to every packed config, in place.

    ctrl_cols/tgt_cols: (ns, 4) int64 column indices; table: (16,) uint8
    mapping a 4-bit control pattern to a 4-bit target flip mask.  Returns 0,
    or 1 if any control pattern of odd weight was seen (callers raise).
    """
    bad = 0
    for s in range(ctrl_cols.shape[0]):
        idx = get_column(configs, int(ctrl_cols[s, 0]))
        idx = idx | (get_column(configs, int(ctrl_cols[s, 1])) << np.uint64(1))
        idx = idx | (get_column(configs, int(ctrl_cols[s, 2])) << np.uint64(2))
        idx = idx | (get_column(configs, int(ctrl_cols[s, 3])) << np.uint64(3))
        idx = idx.astype(np.int64)
        w = (idx & 1) + ((idx >> 1) & 1) + ((idx >> 2) & 1) + ((idx >> 3) & 1)
        if np.any(w & 1):
            bad = 1
        masks = table[idx]
        for t in range(4):
            xor_column(configs, int(tgt_cols[s, t]), (masks >> t) & 1)
    return bad


def ghz_aligned(configs: np.ndarray, tgt_cols: np.ndarray) -> bool:
    """True when, in every config, each square's 4 target bits agree."""
    for s in range(tgt_cols.shape[0]):
        b0 = get_column(configs, int(tgt_cols[s, 0]))
        for t in range(1, 4):
            if np.any(b0 != get_column(configs, int(tgt_cols[s, t]))):
                return False
    return True
