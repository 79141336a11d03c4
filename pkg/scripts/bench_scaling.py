#!/usr/bin/env python3
"""Timing sweep: build cost and per-reported-color query cost as N doubles.

Example:
    python3 scripts/bench_scaling.py --min-log-n 14 --max-log-n 18 --sigma 256
"""

import argparse
import statistics
import time

import numpy as np

from topkolors import OptimalTopK, new_color_array


def make_array(rng, n, sigma):
    colors = rng.integers(0, sigma, size=n)
    colors[::n // sigma][:sigma] = rng.permutation(sigma)
    prio = {c: int(p) for c, p in enumerate(rng.permutation(sigma * 4)[:sigma])}
    return new_color_array(colors, prio)


def per_color_us(index, queries, k):
    samples = []
    for a, b in queries:
        t0 = time.perf_counter()
        res = index.topk(a, b, k)
        dt = time.perf_counter() - t0
        samples.append(dt * 1e6 / max(1, len(res)))
    return statistics.median(samples)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--min-log-n", type=int, default=14)
    ap.add_argument("--max-log-n", type=int, default=18)
    ap.add_argument("--sigma", type=int, default=256)
    ap.add_argument("--queries", type=int, default=200)
    ap.add_argument("--k-small", type=int, default=8)
    ap.add_argument("--k-large", type=int, default=1024)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"{'n':>10} {'build_s':>9} {'us/color@K=' + str(args.k_small):>16} "
          f"{'us/color@K=' + str(args.k_large):>16}")
    for log_n in range(args.min_log_n, args.max_log_n + 1):
        n = 1 << log_n
        arr = make_array(rng, n, args.sigma)
        t0 = time.perf_counter()
        index = OptimalTopK(arr)
        build_s = time.perf_counter() - t0
        queries = []
        for _ in range(args.queries):
            a = int(rng.integers(1, n // 2))
            b = int(rng.integers(a + n // 4, n + 1))
            queries.append((a, b))
        for a, b in queries[:20]:  # warm caches before timing
            index.topk(a, b, args.k_small)
        small = per_color_us(index, queries, args.k_small)
        large = per_color_us(index, queries, args.k_large)
        print(f"{n:>10} {build_s:>9.3f} {small:>16.2f} {large:>16.2f}")


if __name__ == "__main__":
    main()
