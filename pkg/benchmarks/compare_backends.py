#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Runs the three hot kernels (edge materialization, combined-weight
Dijkstra, Pareto label setting) on identical instances under both
backends and prints a timing table plus a bit-identity check of the
results.  Sizes stay modest because the numpy Pareto path is the slow
one by design.

Usage: python benchmarks/compare_backends.py [--n-dijkstra 2048]
       [--n-pareto 256] [--seed 7]
"""

import argparse
import time

import numpy as np

from cspath import _kernels_numba as kb
from cspath import _kernels_numpy as kn
from cspath.rng import DistributionSpec


def _time(fn, *args, repeat=3):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n-dijkstra", type=int, default=2048)
    ap.add_argument("--n-pareto", type=int, default=256)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    seed = np.uint64(args.seed)
    uni = DistributionSpec.uniform().kernel_args()
    empty = np.empty(0)

    rows = []

    n = args.n_dijkstra
    # warm up the jit before timing
    kb.materialize(64, seed, *uni, *uni)
    t_nb, (w_nb, c_nb) = _time(kb.materialize, n, seed, *uni, *uni)
    t_np, (w_np, c_np) = _time(kn.materialize, n, seed, *uni, *uni)
    same = np.array_equal(w_nb, w_np) and np.array_equal(c_nb, c_np)
    rows.append(("materialize", n, t_nb, t_np, same))

    kb.dijkstra(64, 0, 1, 0.5, 0, empty, empty, seed, *uni, *uni)
    t_nb, r_nb = _time(kb.dijkstra, n, 0, 1, 0.5, 0, empty, empty, seed, *uni, *uni)
    t_np, r_np = _time(kn.dijkstra, n, 0, 1, 0.5, 0, empty, empty, seed, *uni, *uni)
    same = r_nb[0][1] == r_np[0][1]
    rows.append(("dijkstra", n, t_nb, t_np, same))

    n = args.n_pareto
    kb.pareto_labels(32, 0, 0, empty, empty, seed, *uni, *uni, 10**8)
    t_nb, r_nb = _time(kb.pareto_labels, n, 0, 0, empty, empty, seed, *uni, *uni, 10**8)
    t_np, r_np = _time(kn.pareto_labels, n, 0, 0, empty, empty, seed, *uni, *uni, 10**8)
    same = (r_nb[5] == r_np[5]
            and np.array_equal(np.sort(r_nb[0]), np.sort(r_np[0]))
            and np.array_equal(np.sort(r_nb[1]), np.sort(r_np[1])))
    rows.append(("pareto_labels", n, t_nb, t_np, same))

    print(f"{'kernel':<14} {'n':>6} {'numba':>10} {'numpy':>10} {'speedup':>8}  identical")
    for name, n, t_nb, t_np, same in rows:
        print(f"{name:<14} {n:>6} {t_nb:>9.4f}s {t_np:>9.4f}s "
              f"{t_np / t_nb:>7.1f}x  {same}")


if __name__ == "__main__":
    main()
