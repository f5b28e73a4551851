"""Compare the compiled and numpy kernels on typical problem sizes.

Run with ``python benchmarks/bench_kernels.py``. Prints the best-of-repeats
time per call for each kernel and backend and the speedup.
"""
import argparse
import timeit

import numpy as np

from multistrat import _kernels_py

try:
    from multistrat import _kernels
except ImportError:  # pragma: no cover - extension not built
    _kernels = None


def cases(P: int, n: int):
    rng = np.random.default_rng(0)
    dt = np.full(P - 1, 1.0 / (P - 1))
    dW = rng.normal(0.0, np.sqrt(dt))
    F = rng.normal(size=(n, P))
    dF = rng.normal(size=(n, P))
    slope = rng.choice([-8.0, 8.0], size=P - 1)
    return {
        "ito_integral": (F[0], dW),
        "trapezoid_integral": (F[0], dt),
        "corrected_trapezoid": (F[0], dF[0, :-1], dF[0, 1:], dt),
        "strat_recursion": (F, dW, dt),
        "stieltjes_recursion": (F, dF, slope, dt, True),
    }


def best_time(fn, args, repeat: int) -> float:
    timer = timeit.Timer(lambda: fn(*args))
    number, _ = timer.autorange()
    return min(timer.repeat(repeat=repeat, number=number)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=2**14 + 1)
    ap.add_argument("--order", type=int, default=4)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled extension not available; nothing to compare")
        return
    print(f"P={args.points} n={args.order}")
    print(f"{'kernel':22s} {'python [us]':>12s} {'cython [us]':>12s} {'speedup':>8s}")
    for name, a in cases(args.points, args.order).items():
        tp = best_time(getattr(_kernels_py, name), a, args.repeat)
        tc = best_time(getattr(_kernels, name), a, args.repeat)
        print(f"{name:22s} {tp * 1e6:12.1f} {tc * 1e6:12.1f} {tp / tc:8.2f}")


if __name__ == "__main__":
    main()
