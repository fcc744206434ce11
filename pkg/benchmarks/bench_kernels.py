"""Time the compiled and pure-Python L1 history kernels on the same inputs.

    python3 benchmarks/bench_kernels.py --sizes 256,1024,4096 --repeat 3
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from caputo_l1 import _l1_py
from caputo_l1.l1 import weights

try:
    from caputo_l1 import _l1_ext
except ImportError:
    _l1_ext = None


def best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="256,1024,4096",
                        type=lambda s: [int(x) for x in s.split(",")])
    parser.add_argument("--alpha", type=float, default=0.5)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)

    if _l1_ext is None:
        print("compiled extension not built; timing the Python kernel only")
    rng = np.random.default_rng(0)
    print(f"{'N':>6} {'python [s]':>12} {'cython [s]':>12} {'speedup':>8} {'max |diff|':>11}")
    for n in args.sizes:
        b = np.ascontiguousarray(weights(args.alpha, n).b)
        d = rng.normal(size=n)
        t_py = best_of(lambda: _l1_py.history_sums(b, d), args.repeat)
        if _l1_ext is None:
            print(f"{n:>6} {t_py:>12.4f} {'-':>12} {'-':>8} {'-':>11}")
            continue
        t_cy = best_of(lambda: _l1_ext.history_sums(b, d), args.repeat)
        diff = np.max(np.abs(np.asarray(_l1_ext.history_sums(b, d)) - _l1_py.history_sums(b, d)))
        print(f"{n:>6} {t_py:>12.4f} {t_cy:>12.4f} {t_py / t_cy:>8.1f} {diff:>11.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
