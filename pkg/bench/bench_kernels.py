"""Benchmark the jitted kernels against the pure-numpy fallback.

Run from the repository root:

    python bench/bench_kernels.py [--sizes 500,1500] [--repeat 3]

Times full row reduction and a matrix product for GF(2) (bit-packed) and
F_251 (byte matrices).  With COCLASS_NO_NUMBA=1 only the numpy path
exists, so there is nothing to compare and the script says so.
"""

import argparse
import time

import numpy as np

from coclass import kernels
from coclass.fpmat import FpMatrix


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_rref_u8(n, p, repeat, rng):
    dense = rng.integers(0, p, size=(n, n), dtype=np.uint8)
    variants = {"numpy": kernels.rref_u8_numpy}
    if kernels.USE_NUMBA:
        variants["numba"] = kernels.rref_u8
        kernels.rref_u8(dense.copy(), p)  # warm the JIT
    return {name: _time(lambda f=fn: f(dense.copy(), p), repeat)
            for name, fn in variants.items()}


def bench_rref_b2(n, repeat, rng):
    dense = rng.integers(0, 2, size=(n, n), dtype=np.uint8)
    packed = FpMatrix.from_dense(2, dense)._d
    variants = {"numpy": kernels.rref_b2_numpy}
    if kernels.USE_NUMBA:
        variants["numba"] = kernels.rref_b2
        kernels.rref_b2(packed.copy(), n)
    return {name: _time(lambda f=fn: f(packed.copy(), n), repeat)
            for name, fn in variants.items()}


def bench_matmul_u8(n, p, repeat, rng):
    a = rng.integers(0, p, size=(n, n), dtype=np.uint8)
    b = rng.integers(0, p, size=(n, n), dtype=np.uint8)
    variants = {"numpy": kernels.matmul_u8_numpy}
    if kernels.USE_NUMBA:
        variants["numba"] = kernels.matmul_u8
        kernels.matmul_u8(a, b, p)
    return {name: _time(lambda f=fn: f(a, b, p), repeat)
            for name, fn in variants.items()}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="500,1500")
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    rng = np.random.default_rng(0)

    if not kernels.USE_NUMBA:
        print("numba path disabled (COCLASS_NO_NUMBA or numba missing); "
              "timing the numpy fallback only")
    rows = []
    for n in sizes:
        rows.append((f"rref GF(2) {n}x{n} packed", bench_rref_b2(n, args.repeat, rng)))
        rows.append((f"rref F_251 {n}x{n}", bench_rref_u8(n, 251, args.repeat, rng)))
        rows.append((f"matmul F_251 {n}x{n}", bench_matmul_u8(n, 251, args.repeat, rng)))
    width = max(len(r[0]) for r in rows)
    print(f"{'kernel'.ljust(width)}  numpy[s]   numba[s]   speedup")
    for name, t in rows:
        np_t = t["numpy"]
        if "numba" in t:
            nb_t = t["numba"]
            print(f"{name.ljust(width)}  {np_t:8.4f}   {nb_t:8.4f}   {np_t / nb_t:6.1f}x")
        else:
            print(f"{name.ljust(width)}  {np_t:8.4f}   {'-':>8}   {'-':>6}")


if __name__ == "__main__":
    main()
