"""Benchmark the exit-time sampling backends against each other.

Times exit_batch on each available backend for the three stochastic
interarrival laws, prints throughput and speedup, and cross-checks that
the backends agree on the same substream.

    python benchmarks/bench_exit_sampling.py --samples 2000000
"""
import argparse
import time

import numpy as np

from duelsim import _exitpy

try:
    from duelsim import _exitcore
except ImportError:
    _exitcore = None

LAWS = [
    ("exponential(1.0)", _exitpy.LAW_EXPONENTIAL, 1.0, 0.0),
    ("uniform(0.5,1.5)", _exitpy.LAW_UNIFORM, 0.5, 1.5),
    ("gamma(2.0,0.5)", _exitpy.LAW_GAMMA, 2.0, 0.5),
]


def substream(seed: int) -> np.random.PCG64:
    return np.random.PCG64(np.random.SeedSequence((seed, 0)))


def bench_one(kernel, law, p0, p1, threshold, n, seed, repeats):
    best = float("inf")
    out = None
    for _ in range(repeats):
        gen = substream(seed)
        t0 = time.perf_counter()
        out = kernel.exit_batch(law, p0, p1, threshold, n, gen)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=1_000_000)
    ap.add_argument("--threshold", type=float, default=10.0)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    kernels = [("pure-python", _exitpy)]
    if _exitcore is not None:
        kernels.append(("compiled", _exitcore))
    else:
        print("compiled extension not available; timing the fallback only")

    header = f"{'law':<18} {'backend':<12} {'time [s]':>9} {'Msamp/s':>9} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, law, p0, p1 in LAWS:
        results = {}
        base_time = None
        for kname, kernel in kernels:
            elapsed, out = bench_one(
                kernel, law, p0, p1, args.threshold,
                args.samples, args.seed, args.repeats,
            )
            results[kname] = out
            if base_time is None:
                base_time = elapsed
            rate = args.samples / elapsed / 1e6
            speedup = base_time / elapsed
            print(f"{name:<18} {kname:<12} {elapsed:9.3f} {rate:9.2f} {speedup:7.1f}x")
        if len(results) == 2:
            nu_p, pre_p, exi_p = results["pure-python"]
            nu_c, pre_c, exi_c = results["compiled"]
            match = float((nu_p == nu_c).mean())
            gap = max(
                float(np.abs(pre_p - pre_c).max()),
                float(np.abs(exi_p - exi_c).max()),
            )
            print(f"{'':<18} agreement: nu match {match:.6f}, max |dt| {gap:.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
