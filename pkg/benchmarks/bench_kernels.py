#!/usr/bin/env python3
"""Benchmark the jitted kernels against the pure-Python/NumPy fallbacks.

Runs each hot kernel on a representative workload with both backends in the
same process (the fallback functions stay importable next to their compiled
versions) and prints a timing table.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from heffter import kernels
from heffter.pfarray import cyclic_diagonal_skeleton


def _tables(n: int, k: int) -> kernels.ScanTables:
    skel = cyclic_diagonal_skeleton(n, k)
    return kernels.build_scan_tables(n, n, [(i - 1, j - 1) for (i, j) in skel.filled])


def bench(label: str, fn, args, repeat: int) -> float:
    fn(*args)  # warm-up / JIT compile
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    print(f"  {label:<28} {best * 1e3:10.2f} ms")
    return best


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    repeat = args.repeat

    if not kernels.HAVE_NUMBA:
        print("numba unavailable or disabled (HEFFTER_PURE_NUMPY); comparing "
              "the fallback against itself is pointless here.")
        return

    print(f"backend: {kernels.active_backend()}  (repeat={repeat}, best-of)")

    # 1. exhaustive orientation scan: 2^18 column vectors on an 18x18 skeleton
    t = _tables(18, 5)
    masks = np.empty(1 << 18, dtype=np.int64)
    scan_args = (t.rows, t.cols, t.row_next, t.row_prev, t.col_next, t.col_prev,
                 18, 18, True, masks)
    print("orientation scan, 2^18 column vectors x 90 cells:")
    a = bench("numba", kernels.scan_orientations, scan_args, repeat)
    b = bench("pure python", kernels.scan_orientations_py, scan_args, repeat)
    print(f"  speedup: {b / a:6.1f}x")

    # 2. single long tour orbit on a large skeleton
    t = _tables(601, 9)
    row_rev = np.zeros(601, dtype=np.uint8)
    col_rev = np.zeros(601, dtype=np.uint8)
    col_rev[0] = 1
    out = np.empty(t.ncells, dtype=np.int64)
    tour_args = (t.rows, t.cols, t.row_next, t.row_prev, t.col_next, t.col_prev,
                 row_rev, col_rev, 0, out)
    print("tour orbit, 5409-cell skeleton x 1000 repeats:")

    def many_tours(*a):
        for _ in range(1000):
            kernels.tour_orbit(*a)

    def many_tours_py(*a):
        for _ in range(1000):
            kernels.tour_orbit_py(*a)

    a = bench("numba", many_tours, tour_args, repeat)
    b = bench("pure python", many_tours_py, tour_args, repeat)
    print(f"  speedup: {b / a:6.1f}x")

    # 3. face-orbit tracing over ~1.3M oriented edges
    rng = np.random.default_rng(7)  # benchmark workload only; library code is seedless
    n_edges = 1 << 20
    succ = rng.permutation(n_edges).astype(np.int64)
    order = np.empty(n_edges, dtype=np.int64)
    lens = np.empty(n_edges, dtype=np.int64)
    print("orbit tracing, 2^20 oriented edges:")

    def run_trace(fn):
        ids = np.full(n_edges, -1, dtype=np.int64)
        return fn(succ, order, ids, lens)

    a = bench("numba", lambda: run_trace(kernels.trace_orbits), (), repeat)
    b = bench("pure python", lambda: run_trace(kernels.trace_orbits_py), (), repeat)
    print(f"  speedup: {b / a:6.1f}x")


if __name__ == "__main__":
    main()
