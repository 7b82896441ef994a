"""Time the hot kernels on both backends.

Run as ``python3 benchmarks/bench_kernels.py``. The numba backend pays its
compilation once up front (excluded via a warmup call); after that the two
backends compute bit-identical answers, so this is purely a speed report.
"""

import argparse
import time

import numpy as np

from expandlab.kernels import numba_impl, numpy_impl


def _time(fn, *args, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_block_scores(repeats):
    rng = np.random.default_rng(0)
    rows = []
    for n, d, r, m in [(5, 2, 2, 512), (6, 3, 2, 512), (8, 3, 3, 256)]:
        mats = rng.integers(0, 2, size=(d, n, n)).astype(np.int64)
        block = rng.integers(0, 2, size=(m, n, r)).astype(np.int64)
        numba_impl.gf_block_scores(mats, block[:4], 2)  # warmup/compile
        t_np = _time(numpy_impl.gf_block_scores, mats, block, 2, repeats=repeats)
        t_nb = _time(numba_impl.gf_block_scores, mats, block, 2, repeats=repeats)
        a = numpy_impl.gf_block_scores(mats, block, 2)
        b = numba_impl.gf_block_scores(mats, block, 2)
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
        rows.append((f"gf_block_scores n={n} d={d} r={r} m={m}", t_np, t_nb))
    return rows


def bench_best_subset(repeats):
    rng = np.random.default_rng(1)
    rows = []
    for n, prob in [(14, 0.3), (16, 0.25), (18, 0.2)]:
        edges = [
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if rng.random() < prob
        ]
        eu = np.array([u for u, _ in edges], dtype=np.int64)
        ev = np.array([v for _, v in edges], dtype=np.int64)
        numba_impl.graph_best_subset(8, eu % 8, ev % 8, 0)  # warmup/compile
        t_np = _time(numpy_impl.graph_best_subset, n, eu, ev, 0, repeats=repeats)
        t_nb = _time(numba_impl.graph_best_subset, n, eu, ev, 0, repeats=repeats)
        assert numpy_impl.graph_best_subset(n, eu, ev, 0) == numba_impl.graph_best_subset(n, eu, ev, 0)
        rows.append((f"graph_best_subset n={n} m={len(edges)}", t_np, t_nb))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    rows = bench_block_scores(args.repeats) + bench_best_subset(args.repeats)
    width = max(len(name) for name, _, _ in rows)
    print(f"{'kernel':<{width}}  {'numpy':>10}  {'numba':>10}  {'speedup':>8}")
    for name, t_np, t_nb in rows:
        print(f"{name:<{width}}  {t_np * 1e3:>8.2f}ms  {t_nb * 1e3:>8.2f}ms  {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
