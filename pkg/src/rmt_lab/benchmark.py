"""Benchmark the numba kernels against the pure-numpy fallback.

Times the two hot paths (PT matrix composition and the closed-form batched
eigensolve) on identical inputs under every buildable backend:

    python -m rmt_lab.benchmark [--n 1000000] [--repeats 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from ._kernels import implementations
from .ensembles import EnsembleSpec, sample_batch


def _time(fn, *args, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def run_benchmark(n: int, repeats: int) -> None:
    rng = np.random.default_rng(2024)
    pt_vals = sample_batch(EnsembleSpec("pt_nu_slice", {"nu0": 0.7}), n, rng).values
    impls = implementations()
    mats = impls["numpy"]["compose_pt_batch"](pt_vals)

    print(f"n = {n}, best of {repeats} runs (seconds)")
    print(f"{'kernel':<24}" + "".join(f"{name:>12}" for name in impls))
    timings = {}
    for kernel, args in (("compose_pt_batch", (pt_vals,)), ("eigvals2x2_batch", (mats,))):
        row = {}
        for name, table in impls.items():
            table[kernel](*args)  # warm-up (JIT compile on the numba path)
            row[name] = _time(table[kernel], *args, repeats=repeats)
        timings[kernel] = row
        print(f"{kernel:<24}" + "".join(f"{row[name]:>12.4f}" for name in impls))
    if "numba" in impls:
        for kernel, row in timings.items():
            print(f"{kernel}: numba speedup x{row['numpy'] / row['numba']:.1f}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=1_000_000)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    run_benchmark(args.n, args.repeats)


if __name__ == "__main__":
    main()
