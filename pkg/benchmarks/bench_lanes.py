"""Compare the compiled kernel lane against the pure-Python fallback.

Times the fused iteration (the O(n^2) hot path) at several swarm sizes,
then a realistic full run. Usage:

    python benchmarks/bench_lanes.py
"""

import time

import numpy as np

import bmo
from bmo import kernel


def bench_step(lane: str, n: int, dim: int = 2, repeats: int = None) -> float:
    """Steps per second for the fused kernel at swarm size n."""
    rng = np.random.default_rng(12345)
    positions = rng.uniform(-4, 4, (n, dim))
    uv = rng.uniform(0, 2, n)
    fitness = rng.uniform(0, 1, n)
    uniforms = rng.uniform(0, 1, n)
    lo = np.full(dim, -4.0)
    hi = np.full(dim, 4.0)
    fn = kernel._LANES[lane]

    if repeats is None:
        repeats = max(3, int(2_000_000 / (n * n)))
    fn(positions, uv, fitness, uniforms, True, 0.4, 0.6, 1.0, 0.05, 0.0, lo, hi)
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn(positions, uv, fitness, uniforms, True, 0.4, 0.6, 1.0, 0.05, 0.0, lo, hi)
    return repeats / (time.perf_counter() - t0)


def bench_run(lane: str) -> float:
    """Wall time of a 60-agent, 300-iteration multimodal run."""
    field = bmo.default_three_peak_field()
    params = bmo.BmoParams(n_agents=60, max_iters=300, seed=1,
                           selection_mode="stochastic", lambda_d=0.5)
    t0 = time.perf_counter()
    kernel.run(field, params, lane=lane)
    return time.perf_counter() - t0


def main():
    lanes = sorted(kernel.available_lanes())
    print(f"available lanes: {', '.join(lanes)} (default: {kernel.default_lane()})")
    print()
    print(f"{'n_agents':>9} " + " ".join(f"{lane + ' steps/s':>16}" for lane in lanes)
          + ("  speedup" if len(lanes) == 2 else ""))
    for n in (8, 32, 128, 512):
        rates = {lane: bench_step(lane, n) for lane in lanes}
        row = f"{n:>9} " + " ".join(f"{rates[lane]:>16.0f}" for lane in lanes)
        if len(lanes) == 2:
            row += f"  {rates['cython'] / rates['python']:>6.1f}x"
        print(row)
    print()
    for lane in lanes:
        print(f"full 60-agent/300-iter run, {lane:>7} lane: {bench_run(lane):6.3f} s")


if __name__ == "__main__":
    main()
