#!/usr/bin/env python3
"""Benchmark the JIT and pure-numpy simulation kernels against each other.

Runs the standard scenario at a few sizes on both backends, checks that
they agree (identical integer draw streams; float results to ~1 ulp), and
prints throughput.  The first JIT call includes compilation; a warm-up run
is timed separately so the table shows steady-state numbers.

Usage:
    python benchmarks/benchmark_backends.py [--trials N]
"""

import argparse
import time

import numpy as np

from netdim import montecarlo as mc
from netdim.params import ChannelModel, SystemParams


def scenario(m=1, db=100.0):
    p = SystemParams.from_ratio(10.0, alpha=4.0, channel=ChannelModel(m, m))
    return p.with_noise_db(db)


def run_once(config, backend):
    t0 = time.perf_counter()
    sinr = mc.sample_sinr(config, backend=backend)
    return time.perf_counter() - t0, sinr


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=200_000)
    args = parser.parse_args()

    backends = mc.available_backends()
    print(f"available backends: {', '.join(backends)}")
    if "numba" in backends:
        warm = mc.SimConfig(params=scenario(), trials=1000, seed=0)
        t = run_once(warm, "numba")[0]
        print(f"JIT warm-up (compilation included): {t:.1f}s")

    header = f"{'case':<28}{'trials':>9}" + "".join(f"{b:>14}" for b in backends) + f"{'speedup':>10}{'max rel diff':>14}"
    print(header)
    print("-" * len(header))
    for name, params in [
        ("rayleigh, noisy", scenario()),
        ("nakagami m=3, noisy", scenario(m=3, db=120.0)),
        ("rayleigh, noiseless", SystemParams.from_ratio(10.0, alpha=4.0)),
    ]:
        config = mc.SimConfig(params=params, trials=args.trials, seed=42)
        times, results = {}, {}
        for b in backends:
            times[b], results[b] = run_once(config, b)
        line = f"{name:<28}{args.trials:>9}"
        for b in backends:
            rate = args.trials / times[b] / 1e6
            line += f"{times[b]:>9.3f}s/{rate:>3.1f}M"
        if len(backends) == 2:
            a, b = results["numba"], results["numpy"]
            finite = np.isfinite(a)
            rel = np.max(np.abs(a[finite] - b[finite]) / np.abs(a[finite])) if finite.any() else 0.0
            assert np.array_equal(np.isfinite(a), np.isfinite(b))
            assert rel < 1e-12, f"backends disagree: {rel}"
            line += f"{times['numpy'] / times['numba']:>9.1f}x{rel:>14.2e}"
        print(line)
    print("agreement asserted at 1e-12 relative on every case")


if __name__ == "__main__":
    main()
