"""numba-jitted kernels; contracts identical to ``_kernels_numpy``.

Importing this module requires numba.  Compilation is cached on disk, so the
first call per process pays the JIT cost once.
"""

from __future__ import annotations

import numba
import numpy as np

NAME = "numba"


@numba.njit(cache=True)
def rref_inplace(data, ncols):  # pragma: no cover - exercised via backend tests
    nrows, nwords = data.shape
    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        w = col >> 6
        mask = np.uint64(1) << np.uint64(col & 63)
        p = -1
        for i in range(r, nrows):
            if data[i, w] & mask:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            for k in range(nwords):
                tmp = data[r, k]
                data[r, k] = data[p, k]
                data[p, k] = tmp
        for i in range(nrows):
            if i != r and (data[i, w] & mask):
                for k in range(nwords):
                    data[i, k] ^= data[r, k]
        r += 1
    return r


@numba.njit(cache=True)
def _popcount64(v):  # pragma: no cover
    v = v - ((v >> np.uint64(1)) & np.uint64(0x5555555555555555))
    v = (v & np.uint64(0x3333333333333333)) + ((v >> np.uint64(2)) & np.uint64(0x3333333333333333))
    v = (v + (v >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return (v * np.uint64(0x0101010101010101)) >> np.uint64(56)


@numba.njit(cache=True)
def parity_products(xs, zs):  # pragma: no cover
    nx, nw = xs.shape
    nz = zs.shape[0]
    out = np.zeros((nx, nz), dtype=np.uint8)
    for i in range(nx):
        for j in range(nz):
            acc = np.uint64(0)
            for k in range(nw):
                acc ^= xs[i, k] & zs[j, k]
            out[i, j] = np.uint8(_popcount64(acc) & np.uint64(1))
    return out


@numba.njit(cache=True, inline="always")
def _getbit(row, col):  # pragma: no cover
    return (row[col >> 6] >> np.uint64(col & 63)) & np.uint64(1)


@numba.njit(cache=True, inline="always")
def _xorbit(row, col, bit):  # pragma: no cover
    row[col >> 6] ^= bit << np.uint64(col & 63)


@numba.njit(cache=True)
def extend_vertex_bits(src, dst, ctrl_pairs, base_col):  # pragma: no cover
    n = src.shape[0]
    nv = ctrl_pairs.shape[0]
    for i in range(n):
        for v in range(nv):
            b = _getbit(src[i], ctrl_pairs[v, 0]) ^ _getbit(src[i], ctrl_pairs[v, 1])
            _xorbit(dst[i], base_col + v, b)


@numba.njit(cache=True)
def apply_square_table(configs, ctrl_cols, tgt_cols, table):  # pragma: no cover
    n = configs.shape[0]
    ns = ctrl_cols.shape[0]
    bad = 0
    for i in range(n):
        row = configs[i]
        for s in range(ns):
            idx = 0
            for b in range(4):
                idx |= int(_getbit(row, ctrl_cols[s, b])) << b
            w = (idx & 1) + ((idx >> 1) & 1) + ((idx >> 2) & 1) + ((idx >> 3) & 1)
            if w & 1:
                bad = 1
            mask = table[idx]
            for t in range(4):
                if (mask >> t) & 1:
                    _xorbit(row, tgt_cols[s, t], np.uint64(1))
    return bad


@numba.njit(cache=True)
def ghz_aligned(configs, tgt_cols):  # pragma: no cover
    n = configs.shape[0]
    ns = tgt_cols.shape[0]
    for i in range(n):
        row = configs[i]
        for s in range(ns):
            b0 = _getbit(row, tgt_cols[s, 0])
            for t in range(1, 4):
                if _getbit(row, tgt_cols[s, t]) != b0:
                    return False
    return True
