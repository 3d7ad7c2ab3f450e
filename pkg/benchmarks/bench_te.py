#!/usr/bin/env python3
"""Benchmark: compiled transfer-entropy kernel vs the NumPy fallback.

Times te_from_digits on IID symbol pairs across series lengths and history
depths, then a full k-sweep through the public API under each backend.

    python benchmarks/bench_te.py [--repeats N]
"""

from __future__ import annotations

import argparse
import os
import time

import numpy as np

os.environ.pop("CASCADEFLOW_PURE_PYTHON", None)

from cascadeflow import _reference  # noqa: E402

try:
    from cascadeflow import _accel
except ImportError:
    _accel = None


def time_call(fn, *args, repeats: int) -> float:
    fn(*args)  # warm up
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    if _accel is None:
        print("compiled kernel not built; benchmarking the fallback only")

    rng = np.random.default_rng(0)
    print(f"{'length':>9} {'k':>3} {'numpy (ms)':>12} {'compiled (ms)':>14} {'speedup':>8}")
    for length in (10_000, 100_000, 1_000_000):
        x = rng.integers(0, 3, length)
        y = rng.integers(0, 3, length)
        for k in (1, 2, 4, 8, 12):
            ref = time_call(_reference.te_from_digits, x, y, k, repeats=args.repeats)
            if _accel is not None:
                acc = time_call(_accel.te_from_digits, x, y, k, repeats=args.repeats)
                a_val = _accel.te_from_digits(x, y, k)[0]
                r_val = _reference.te_from_digits(x, y, k)[0]
                assert abs(a_val - r_val) <= 1e-12, "backends disagree"
                print(
                    f"{length:>9} {k:>3} {ref * 1e3:>12.2f} {acc * 1e3:>14.2f} "
                    f"{ref / acc:>7.1f}x"
                )
            else:
                print(f"{length:>9} {k:>3} {ref * 1e3:>12.2f} {'-':>14} {'-':>8}")

    # end-to-end sweep through the public API, per backend
    import cascadeflow.backend as backend
    import cascadeflow.te as te

    x = rng.integers(1, 4, 200_000)
    y = rng.integers(1, 4, 200_000)
    print("\nk_sweep(k=1..8, tte) on 200k symbols:")
    for name, module in (("compiled", _accel), ("numpy", _reference)):
        if module is None:
            continue
        backend.kernel = module
        te.kernel = module
        t = time_call(lambda: te.k_sweep(x, y, 1, 8, mode="tte"), repeats=max(2, args.repeats // 2))
        print(f"  {name:>8}: {t * 1e3:.1f} ms")


if __name__ == "__main__":
    main()
