"""Time the compiled oracle kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

from __future__ import annotations

import argparse
import time

from ladprob import _kernels_py

try:
    from ladprob import _ckernels
except ImportError:
    _ckernels = None

CASES = [
    ("exhaustive_m1 4x4 n=6", "exhaustive_m1", (4, 4, 6)),
    ("exhaustive_m2 4x4 n=6", "exhaustive_m2", (4, 4, 6)),
    ("exhaustive_m2 2x8 n=8", "exhaustive_m2", (2, 8, 8)),
    ("sample_tally M2 8x16 5+20 x20k", "sample_tally", (8, 16, 5, 20, 20_000, 1, False, 0)),
    ("sample_tally M1 4x8 3+4 x20k", "sample_tally", (4, 8, 3, 4, 20_000, 1, True, 0)),
]


def best_time(fn, args, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if _ckernels is None:
        print("compiled kernels not built; nothing to compare")
        return
    print(f"{'case':<34} {'python s':>10} {'cython s':>10} {'speedup':>8}  same")
    for label, name, call in CASES:
        tp, rp = best_time(getattr(_kernels_py, name), call, args.repeat)
        tc, rc = best_time(getattr(_ckernels, name), call, args.repeat)
        print(f"{label:<34} {tp:>10.4f} {tc:>10.4f} {tp / tc:>7.1f}x  {rp == rc}")


if __name__ == "__main__":
    main()
