#!/usr/bin/env python3
"""Compare the numba kernels against the pure-numpy fallback.

The accelerated path is chosen at import time via FOLLOWERLENS_NUMBA, so
this script re-executes itself once per mode and prints a small table:

    python3 benchmarks/bench_accel.py
"""
import json
import os
import subprocess
import sys
import time

import numpy as np

SIZES = [(200, 8), (500, 18), (1000, 18)]
REPEATS = 3


def bench_mode() -> dict:
    from followerlens.accel import USE_NUMBA, rbf_matrix, smo_solve

    rng = np.random.default_rng(0)
    results = {"mode": "numba" if USE_NUMBA else "numpy", "cases": []}
    for n, d in SIZES:
        X = rng.normal(size=(n, d))
        y = np.where(rng.random(n) < 0.5, 1.0, -1.0)
        y[:2] = (1.0, -1.0)

        rbf_matrix(X[:4], X[:4], 0.1)  # trigger any JIT compilation
        t0 = time.perf_counter()
        for _ in range(REPEATS):
            K = rbf_matrix(X, X, 0.1)
        t_rbf = (time.perf_counter() - t0) / REPEATS

        smo_solve(np.ascontiguousarray(K[:4, :4]), y[:4], 1.0, 1e-4, 1000)
        t0 = time.perf_counter()
        for _ in range(REPEATS):
            smo_solve(K, y, 10.0, 1e-4, 200_000)
        t_smo = (time.perf_counter() - t0) / REPEATS

        results["cases"].append({"n": n, "d": d, "rbf_s": t_rbf, "smo_s": t_smo})
    return results


def main():
    if os.environ.get("_BENCH_CHILD"):
        print(json.dumps(bench_mode()))
        return
    rows = []
    for numba_flag in ("1", "0"):
        env = dict(os.environ, _BENCH_CHILD="1", FOLLOWERLENS_NUMBA=numba_flag)
        out = subprocess.run([sys.executable, __file__], env=env,
                             capture_output=True, text=True, check=True)
        rows.append(json.loads(out.stdout.strip().splitlines()[-1]))

    print(f"{'case':>12} {'kernel':>8} {'numba':>10} {'numpy':>10} {'ratio':>7}")
    for fast, slow in zip(rows[0]["cases"], rows[1]["cases"]):
        case = f"{fast['n']}x{fast['d']}"
        for kernel in ("rbf", "smo"):
            a, b = fast[f"{kernel}_s"], slow[f"{kernel}_s"]
            ratio = b / a if a > 0 else float("inf")
            print(f"{case:>12} {kernel:>8} {a:>9.4f}s {b:>9.4f}s {ratio:>6.1f}x")


if __name__ == "__main__":
    main()
