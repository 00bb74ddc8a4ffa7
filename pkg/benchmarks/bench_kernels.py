"""Compare the numba and numpy kernel backends.

Usage: python benchmarks/bench_kernels.py [--size N] [--repeats R]

Times each hot kernel on an NxN problem with both implementations and prints
a speedup table. Run with RANKFILL_NO_NUMBA unset so both backends load.
"""

import argparse
import time

import numpy as np

from rankfill import kernels


def _time(fn, args, repeats):
    fn(*args)  # warm-up (triggers JIT compilation on the numba path)
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--size", type=int, default=512)
    ap.add_argument("--repeats", type=int, default=20)
    args = ap.parse_args()

    if kernels.NUMBA_KERNELS is None:
        raise SystemExit("numba backend unavailable (RANKFILL_NO_NUMBA set?)")

    rng = np.random.default_rng(0)
    n = args.size
    u = rng.standard_normal((n, n))
    m1 = rng.standard_normal((n, n))
    m2 = rng.standard_normal((n, n))
    prox_coeffs = (0.18, 5.5556e-6, 1.2195, 0.2195, 1.0)
    cases = {
        "d1": (u,),
        "d2": (u,),
        "div_adjoint": (m1, m2),
        "prox_apply": (m1, m2) + prox_coeffs,
    }

    print(f"kernel benchmark, {n}x{n}, best of {args.repeats}")
    print(f"{'kernel':<14}{'numpy (ms)':>12}{'numba (ms)':>12}{'speedup':>10}")
    for name, call_args in cases.items():
        t_np = _time(kernels.NUMPY_KERNELS[name], call_args, args.repeats)
        t_nb = _time(kernels.NUMBA_KERNELS[name], call_args, args.repeats)
        print(f"{name:<14}{t_np * 1e3:>12.3f}{t_nb * 1e3:>12.3f}{t_np / t_nb:>9.2f}x")


if __name__ == "__main__":
    main()
