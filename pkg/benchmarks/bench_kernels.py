"""Compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--size N] [--repeat R]

Times the special functions and both cycle kernels on random batches, then
an end-to-end fig4 sweep with each backend in a fresh interpreter.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from qotto import _cycle_kernels as kern
from qotto import deformed_math as dm
from qotto._accel import NUMBA_ENABLED


def best_of(fn, args, repeat):
    fn(*args)  # warm-up / compile
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def sweep_seconds(disable):
    env = dict(os.environ, QOTTO_DISABLE_NUMBA="1" if disable else "0")
    script = (
        "import time; from qotto import presets; from qotto.sweep import run_sweep\n"
        "run_sweep(presets.fig4(n=5))\n"
        "t0 = time.perf_counter(); run_sweep(presets.fig4()); print(time.perf_counter() - t0)"
    )
    out = subprocess.run([sys.executable, "-c", script], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--size", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=5)
    opts = ap.parse_args()
    if not NUMBA_ENABLED:
        sys.exit("numba backend disabled; unset QOTTO_DISABLE_NUMBA / NUMBA_DISABLE_JIT")

    rng = np.random.default_rng(0)
    n = opts.size
    x = rng.uniform(-10.0, 10.0, n)
    batch = (
        rng.uniform(0.3, 1.0, n), rng.uniform(0.6, 8.0, n),
        rng.uniform(0.3, 2.0, n), rng.uniform(0.3, 2.0, n),
        rng.uniform(5.0, 10.0, n), rng.uniform(0.2, 5.0, n),
    )
    rows = [
        ("erf", dm._erf_loop, dm._erf_np, (x,)),
        ("erfc", dm._erfc_loop, dm._erfc_np, (x,)),
        ("dawson", dm._dawson_loop, dm._dawson_np, (x,)),
        ("closed heats", kern.closed_heats_loop, kern.closed_heats_np, batch),
        ("discrete sums", kern.sum_cycle_loop, kern.sum_cycle_np, batch),
    ]
    print(f"{'kernel':<16}{'numba [ms]':>12}{'numpy [ms]':>12}{'speed-up':>10}   (n = {n})")
    for name, fast, slow, args in rows:
        a = best_of(fast, args, opts.repeat)
        b = best_of(slow, args, opts.repeat)
        print(f"{name:<16}{a * 1e3:12.2f}{b * 1e3:12.2f}{b / a:10.1f}")

    a, b = sweep_seconds(False), sweep_seconds(True)
    print(f"{'fig4 sweep':<16}{a * 1e3:12.2f}{b * 1e3:12.2f}{b / a:10.1f}   (41 x 41, both methods)")


if __name__ == "__main__":
    main()
