"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time

import numpy as np

from quadreturns import _numba_kernels as nb
from quadreturns import _numpy_kernels as npk

THRESHOLDS = (0.25, 0.5, 0.75)


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def cases():
    yield "survival_log n=20000", lambda m: m.survival_log(20000, 0.3)
    yield "dense_onedim k=600", lambda m: m.dense_onedim(600, 0.25)
    yield "simulate_block 2^16 x n=64", lambda m: m.simulate_block(7, 0, 1 << 16, 64, *THRESHOLDS)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    print(f"{'kernel':32s} {'numba s':>10s} {'numpy s':>10s} {'speedup':>8s}  same")
    for name, call in cases():
        call(nb)  # compile outside the timing
        t_nb, out_nb = best_of(lambda: call(nb), args.repeat)
        t_np, out_np = best_of(lambda: call(npk), args.repeat)
        if isinstance(out_nb, tuple):
            same = all(np.allclose(a, b, rtol=1e-12, atol=0) for a, b in zip(out_nb, out_np))
        else:
            same = np.allclose(out_nb, out_np, rtol=1e-12, atol=0)
        print(f"{name:32s} {t_nb:10.4f} {t_np:10.4f} {t_np / t_nb:8.1f}  {same}")


if __name__ == "__main__":
    main()
