"""Compare the numba and numpy kernels on batched diagram composition.

    python benchmarks/bench_kernels.py --n 6 --rows 2000

Prints compositions per second for each backend and the speedup.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from vtl import _kernels
from vtl.algebra import element_mul
from vtl.diagram import rows_for
from vtl.projector import f_kernel, f_simplified


def _pairs(n: int, count: int, seed: int):
    rows = rows_for(n).astype(np.int64)
    rng = np.random.default_rng(seed)
    A = rows[rng.integers(0, len(rows), size=count)]
    B = rows[rng.integers(0, len(rows), size=count)]
    return A, B


def bench_keys(n: int, count: int, repeat: int) -> float:
    A, B = _pairs(n, count, 0)
    wa = np.zeros(len(A), dtype=np.int64)
    wb = np.zeros(len(B), dtype=np.int64)
    L = n + 1
    size = _kernels.dimension(n) * L
    _kernels.accumulate(A[:2], B[:2], wa[:2], wb[:2], n, L, size)  # compile outside the timer
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        _kernels.accumulate(A, B, wa, wb, n, L, size)
        best = min(best, time.perf_counter() - t0)
    return len(A) * len(B) / best


def bench_product(n: int) -> float:
    left, right = f_simplified(n - 1).embed(n), f_kernel(n)
    element_mul(left, right)
    t0 = time.perf_counter()
    element_mul(left, right)
    return time.perf_counter() - t0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=6)
    ap.add_argument("--rows", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    backends = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])
    rates, products = {}, {}
    before = _kernels.BACKEND
    try:
        for name in backends:
            _kernels.set_backend(name)
            rates[name] = bench_keys(args.n, args.rows, args.repeat)
            products[name] = bench_product(args.n)
            print(
                f"{name:>6}: {rates[name] / 1e6:8.2f} M compositions/s   "
                f"f_{args.n - 1} * fK_{args.n}: {products[name]:.3f}s"
            )
    finally:
        _kernels.set_backend(before)
    if len(rates) == 2:
        print(f"speedup: {rates['numba'] / rates['numpy']:.1f}x kernel, {products['numpy'] / products['numba']:.1f}x product")
    else:
        print("numba not installed; only the numpy backend was measured")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
