#!/usr/bin/env python3
"""Time the compiled kernels against the pure-Python reference.

Each kernel runs the same workload through both backends, including the
argument conversions the public wrappers perform, so the numbers
reflect what callers actually pay.  Outputs are also compared for exact
equality; a benchmark that drifts numerically is reporting nonsense.

Usage::

    python benchmarks/bench_kernels.py [--tokens N] [--repeats R] [--seed S]
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from halograph.kernels import _purepy

try:
    from halograph.kernels import _speedups
except ImportError:
    _speedups = None


def best_of(repeats, fn):
    times = []
    for _ in range(repeats):
        started = time.perf_counter()
        fn()
        times.append(time.perf_counter() - started)
    return min(times)


def build_workload(n, seed):
    rng = random.Random(seed)
    rows = [
        sorted((rng.random() for _ in range(3)), reverse=True) for _ in range(n)
    ]
    positions = list(range(1, n + 1))
    values = [float(rng.randint(0, 50)) for _ in range(n)]  # heavy ties
    labels = [rng.randint(0, 1) for _ in range(n)]
    labels[0], labels[1] = 0, 1
    return rows, positions, values, labels


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--tokens", type=int, default=200_000, help="workload size")
    parser.add_argument("--repeats", type=int, default=5, help="timing repeats (best kept)")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    n = args.tokens
    rows, positions, values, labels = build_workload(n, args.seed)

    # Native-path inputs, converted exactly the way the wrappers do.
    rows_arr = np.ascontiguousarray(rows, dtype=np.float64)
    pos_arr = np.ascontiguousarray(positions, dtype=np.int64)
    values_arr = np.ascontiguousarray(values, dtype=np.float64)
    labels_arr = np.ascontiguousarray(labels, dtype=np.int64)

    cases = [
        (
            "token_uncertainty_batch",
            lambda: _purepy.token_uncertainty_batch(rows, positions, n),
            lambda: _speedups.token_uncertainty_batch(rows_arr, pos_arr, n).tolist(),
        ),
        (
            "interpolated_quantile",
            lambda: _purepy.interpolated_quantile(values, 0.8),
            lambda: float(_speedups.interpolated_quantile(values_arr, 0.8)),
        ),
        (
            "average_ranks",
            lambda: _purepy.average_ranks(values),
            lambda: _speedups.average_ranks(values_arr).tolist(),
        ),
        (
            "rank_auc",
            lambda: _purepy.rank_auc(values, labels),
            lambda: float(_speedups.rank_auc(values_arr, labels_arr)),
        ),
        (
            "entropy_batch",
            lambda: _purepy.entropy_batch(rows),
            lambda: _speedups.entropy_batch(rows_arr).tolist(),
        ),
    ]

    header = f"{'kernel':<24}{'n':>9}{'python (ms)':>14}{'native (ms)':>14}{'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, python_call, native_call in cases:
        python_s = best_of(args.repeats, python_call)
        if _speedups is None:
            print(f"{name:<24}{n:>9}{python_s * 1e3:>14.2f}{'n/a':>14}{'n/a':>9}")
            continue
        if python_call() != native_call():
            raise SystemExit(f"{name}: backends disagree; timings would be meaningless")
        native_s = best_of(args.repeats, native_call)
        print(
            f"{name:<24}{n:>9}{python_s * 1e3:>14.2f}{native_s * 1e3:>14.2f}"
            f"{python_s / native_s:>8.1f}x"
        )
    if _speedups is None:
        print("\ncompiled extension not importable; only the fallback was timed")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
