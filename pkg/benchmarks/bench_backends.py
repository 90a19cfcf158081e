"""Compare the numba kernels against the pure-numpy fallback.

Times three hot paths: GF(2) elimination (the degeneracy bottleneck),
the generator commutation table, and the full coarse-graining pipeline.

Usage:  python benchmarks/bench_backends.py [--repeats 5] [--rref-rows 2000]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from stabgrid.backend import set_backend
from stabgrid.coarsegrain import verify_coarse_structure
from stabgrid.gf2 import BitMatrix, rank
from stabgrid.models import build_model, parse_model, verify_commutation


def bench(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def make_cases(args):
    rng = np.random.default_rng(7)
    rows, cols = args.rref_rows, args.rref_cols
    words = (cols + 63) // 64
    data = rng.integers(0, 2**63, size=(rows, words), dtype=np.uint64)
    m = BitMatrix(rows, cols, data)

    spec, lat = parse_model("[1,2,3,4]@3x3x3x3:pbc")
    model = build_model(spec, lat)

    return {
        f"rank of a {rows}x{cols} GF(2) matrix": lambda: rank(m),
        "commutation table, 1053 generators on 486 spins": lambda: verify_commutation(model),
        "coarse-graining pipeline at L=4 (32768 configs)": lambda: verify_coarse_structure(4),
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--rref-rows", type=int, default=2000)
    ap.add_argument("--rref-cols", type=int, default=2000)
    args = ap.parse_args()

    results: dict[str, dict[str, float]] = {}
    for backend in ("numba", "numpy"):
        set_backend(backend)
        cases = make_cases(args)
        for label, fn in cases.items():
            fn()  # warm-up (JIT compilation, caches)
            results.setdefault(label, {})[backend] = bench(fn, args.repeats)

    width = max(len(k) for k in results)
    print(f"{'case':<{width}}  {'numba':>10}  {'numpy':>10}  {'speedup':>8}")
    for label, nums in results.items():
        ratio = nums["numpy"] / nums["numba"] if nums["numba"] else float("inf")
        print(f"{label:<{width}}  {nums['numba']*1e3:>8.1f}ms  {nums['numpy']*1e3:>8.1f}ms  {ratio:>7.1f}x")


if __name__ == "__main__":
    main()
