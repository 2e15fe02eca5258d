#!/usr/bin/env python3
"""Time the compiled kernels against the numpy fallback.

Usage: python benchmarks/compare_backends.py [--sizes 200,400,800,1600]

Covers the two hot loops: the all-pairs farthest scan (O(N^2) in dataset
size) and the label permutation (O(2^(n+m)) in register width).
"""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path
from statistics import median

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from qclust._kernels import fallback  # noqa: E402

try:
    from qclust._kernels import _core as compiled
except ImportError:
    compiled = None


def timed(func, repeats: int = 7) -> float:
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        func()
        times.append(time.perf_counter() - start)
    return median(times)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="200,400,800,1600")
    parser.add_argument("--widths", default="12,16,20",
                        help="total register widths n+m for the permutation kernel")
    args = parser.parse_args()

    if compiled is None:
        print("compiled extension not built; run `python setup.py build_ext --inplace`")
        return 1

    rng = np.random.default_rng(0)
    print(f"{'kernel':<24} {'size':>8} {'compiled':>12} {'fallback':>12} {'speedup':>8}")

    for n_points in [int(s) for s in args.sizes.split(",")]:
        pts = np.ascontiguousarray(rng.normal(size=(n_points, 2)))
        t_c = timed(lambda: compiled.max_pairwise_distance(pts, 2.0, False))
        t_f = timed(lambda: fallback.max_pairwise_distance(pts, 2.0, False))
        assert compiled.max_pairwise_distance(pts, 2.0, False)[:2] == \
            fallback.max_pairwise_distance(pts, 2.0, False)[:2]
        print(f"{'max_pairwise_distance':<24} {n_points:>8} "
              f"{t_c * 1e3:>10.3f}ms {t_f * 1e3:>10.3f}ms {t_f / t_c:>7.1f}x")

    for width in [int(w) for w in args.widths.split(",")]:
        n, m = width - 2, 2
        amps = rng.normal(size=1 << width) + 1j * rng.normal(size=1 << width)
        t_c = timed(lambda: compiled.xor_fold_permutation(amps, n, m))
        t_f = timed(lambda: fallback.xor_fold_permutation(amps, n, m))
        print(f"{'xor_fold_permutation':<24} {f'2^{width}':>8} "
              f"{t_c * 1e3:>10.3f}ms {t_f * 1e3:>10.3f}ms {t_f / t_c:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
