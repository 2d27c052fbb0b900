"""Time the compiled and numpy kernels side by side.

Usage: python benchmarks/bench_kernels.py [--sizes 100,200,400,800] [--repeat 3]
"""
import argparse
import time

import numpy as np

from cornerdet import _kernels
from cornerdet.linalg import PIVOT_TINY, as_matrix
from cornerdet.symbols import HermitianFisherHartwig, fourier_coefficients
from cornerdet.toeplitz import build_toeplitz


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_lu(backend, T, repeat):
    def run():
        a = as_matrix(T)
        backend.lu_factor(a, np.zeros(a.shape[0], dtype=np.intp), PIVOT_TINY)
    return best_of(run, repeat)


def bench_levinson(backend, col, repeat):
    n = col.size

    def run():
        backend.levinson(col, np.zeros(n, complex), np.zeros(n - 1, complex), np.zeros(n))
    return best_of(run, repeat)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="100,200,400,800")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    sizes = [int(x) for x in args.sizes.split(",")]
    backends = _kernels.BACKENDS
    if "cython" not in backends:
        print("compiled kernels not built; timing the numpy backend only")
    sym = HermitianFisherHartwig(((1, 0.3), (-1, 0.4)))
    print(f"{'kernel':<10}{'n':>6}" + "".join(f"{name:>12}" for name in backends) + f"{'speedup':>10}")
    for n in sizes:
        T = build_toeplitz(sym, n)
        col = np.ascontiguousarray(fourier_coefficients(sym, 0, n - 1))
        for kernel, fn, arg in (("lu", bench_lu, T), ("levinson", bench_levinson, col)):
            t = {name: fn(b, arg, args.repeat) for name, b in backends.items()}
            speed = f"{t['python'] / t['cython']:9.1f}x" if "cython" in t else ""
            print(f"{kernel:<10}{n:>6}" + "".join(f"{v:12.4f}" for v in t.values()) + f"{speed:>10}")


if __name__ == "__main__":
    main()
