"""Pure numpy implementations of the compiled kernels.

Used when the Cython extension is unavailable or when QCLUST_PURE_PYTHON
is set. Results must be identical to qclust._kernels._core, including
tie-breaking.
"""
from __future__ import annotations

import numpy as np


def max_pairwise_distance(coords: np.ndarray, p: float, chebyshev: bool) -> tuple[int, int, float]:
    """Exhaustive all-pairs farthest scan, one broadcast row at a time.

    Returns (i, j, distance) with i < j; ties resolve to the
    lexicographically smallest index pair.
    """
    n = coords.shape[0]
    if n < 2:
        raise ValueError("need at least 2 points")

    best = -1.0
    best_i, best_j = 0, 1
    for i in range(n - 1):
        diffs = np.abs(coords[i + 1:] - coords[i])
        if chebyshev:
            acc = diffs.max(axis=1)
        elif p == 2.0:
            acc = np.einsum("ij,ij->i", diffs, diffs)
        elif p == 1.0:
            acc = diffs.sum(axis=1)
        else:
            acc = (diffs**p).sum(axis=1)
        j_rel = int(np.argmax(acc))  # first max -> smallest j
        if acc[j_rel] > best:
            best = float(acc[j_rel])
            best_i, best_j = i, i + 1 + j_rel

    if chebyshev or p == 1.0:
        d = best
    elif p == 2.0:
        d = float(np.sqrt(best))
    else:
        d = best ** (1.0 / p)
    return best_i, best_j, d


def xor_fold_permutation(amps: np.ndarray, n: int, m: int) -> np.ndarray:
    """Permute amplitudes by XOR-ing ancilla bits with the top m distance bits.

    Index layout: index = (code << m) | label; the map idx -> idx ^ (idx >> n)
    touches only the m low bits and is an involution.
    """
    size = amps.shape[0]
    if size != 1 << (n + m):
        raise ValueError("amplitude length does not match register width")
    idx = np.arange(size, dtype=np.int64)
    return amps[idx ^ (idx >> n)]
