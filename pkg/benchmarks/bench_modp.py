"""Benchmark the two mod-p elimination backends (numba @njit vs the
vectorized numpy fallback) on random and Koszul-shaped matrices.

    python3 benchmarks/bench_modp.py [--sizes 64 128 256] [--p 10007]

QHW_JIT=0 disables the numba backend at import; this script always
requests both explicitly, so run it with the default environment.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from qhw.linalg import modp_kernels
from qhw.linalg.sparse import SparseMatrix
from qhw.linalg.fields import GF
from qhw.koszul import EndComplexWindow, build_koszul
from qhw.quiver import rose_quiver


def bench(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def random_case(rng, n, p):
    return rng.integers(0, p, size=(n, n), dtype=np.int64)


def koszul_case(depth, p):
    """The degree-0 End-complex differential of the two-loop rose, the
    hottest structured matrix in the package, densified."""
    kw = build_koszul(rose_quiver(2), depth, GF(p))
    end = EndComplexWindow(kw, 0, 1)
    d = end.diff[0]
    arr = np.zeros(d.shape(), dtype=np.int64)
    for (r, c), v in d.entries.items():
        arr[r, c] = int(v) % p
    return arr, d


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", type=int, nargs="*", default=[64, 128, 256])
    parser.add_argument("--p", type=int, default=10007)
    parser.add_argument("--depth", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    print(f"default backend: {modp_kernels.backend_name()}")
    print(f"{'case':>18} {'numba':>10} {'numpy':>10} {'speedup':>8}")

    if modp_kernels.backend_name() == "numba":
        warm = random_case(rng, 8, args.p)
        modp_kernels.rref_modp(warm, args.p, backend="numba")  # compile

    for n in args.sizes:
        a = random_case(rng, n, args.p)
        r_nb = (
            bench(lambda: modp_kernels.rref_modp(a, args.p, backend="numba"))
            if modp_kernels.backend_name() == "numba"
            else float("nan")
        )
        r_np = bench(lambda: modp_kernels.rref_modp(a, args.p, backend="numpy"))
        print(f"{f'random {n}x{n}':>18} {r_nb:10.4f} {r_np:10.4f} "
              f"{r_np / r_nb if r_nb else float('nan'):8.1f}x")

    arr, sp = koszul_case(args.depth, args.p)
    label = f"end-diff {arr.shape[0]}x{arr.shape[1]}"
    r_nb = (
        bench(lambda: modp_kernels.rref_modp(arr, args.p, backend="numba"))
        if modp_kernels.backend_name() == "numba"
        else float("nan")
    )
    r_np = bench(lambda: modp_kernels.rref_modp(arr, args.p, backend="numpy"))
    print(f"{label:>18} {r_nb:10.4f} {r_np:10.4f} "
          f"{r_np / r_nb if r_nb else float('nan'):8.1f}x")
    r_sp = bench(lambda: sp.rank())
    print(f"{'  (sparse exact)':>18} {'':>10} {r_sp:10.4f}   "
          f"(the workhorse used by the verification suites)")


if __name__ == "__main__":
    main()
