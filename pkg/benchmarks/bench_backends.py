#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Runs the same workloads through both backends, verifies the outputs are
bit-identical, and prints a timing table. Usage:

    python benchmarks/bench_backends.py [--nsim 20000]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from relcalc import _pykernels as pyk

try:
    from relcalc import _kernels as ck
except ImportError:
    ck = None

SERIES3_OPS = np.array([0, 0, 0, 1], dtype=np.int64)
SERIES3_ARGS = np.array([0, 1, 2, 3], dtype=np.int64)
ALPHAS = np.array([5.0, 3.0, 2.0])
BETAS = np.array([2.0, 2.0, 2.0])

JOINT = np.array(
    [
        [0.12, 0.03, 0.14, 0.09],
        [0.01, 0.06, 0.08, 0.04],
        [0.05, 0.09, 0.03, 0.05],
        [0.07, 0.12, 0.01, 0.01],
    ]
)
MARGINAL = JOINT.sum(axis=1)
CONDITIONAL = JOINT / MARGINAL[:, None]


def _time(fn):
    start = time.perf_counter()
    result = fn()
    return result, time.perf_counter() - start


def workloads(nsim):
    def beta_draws(kernel):
        pos = 0
        total = 0.0
        for _ in range(nsim):
            v, pos = kernel.beta_one(42, pos, 2.0, 10.0)
            total += v
        return total

    return [
        (f"beta_one x {nsim}", beta_draws),
        (
            f"propagate_run nsim={nsim} (3-leaf series)",
            lambda k: k.propagate_run(7, 0, nsim, SERIES3_OPS, SERIES3_ARGS, ALPHAS, BETAS),
        ),
        (
            f"condition_run nsim={nsim // 4} on 4/4 system tests",
            lambda k: k.condition_run(
                7, 0, nsim // 4, SERIES3_OPS, SERIES3_ARGS, ALPHAS, BETAS, 4, 4, 10**9
            ),
        ),
        (
            f"discrete_run nsim={nsim} (z=2 column)",
            lambda k: k.discrete_run(3, nsim, MARGINAL, CONDITIONAL, 1, 10**9),
        ),
    ]


def _equal(a, b):
    if isinstance(a, tuple):
        return all(_equal(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return a == b


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--nsim", type=int, default=20_000)
    args = parser.parse_args()

    if ck is None:
        print("compiled extension not available; nothing to compare")
        return

    print(f"{'workload':<45} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for name, fn in workloads(args.nsim):
        py_result, py_time = _time(lambda: fn(pyk))
        c_result, c_time = _time(lambda: fn(ck))
        assert _equal(py_result, c_result), f"backend mismatch in {name}"
        print(f"{name:<45} {py_time:>9.3f}s {c_time:>9.3f}s {py_time / c_time:>7.1f}x")
    print("all outputs bit-identical across backends")


if __name__ == "__main__":
    main()
