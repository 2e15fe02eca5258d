# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: all-pairs farthest-distance scan and the ancilla
bit-copy permutation over statevector amplitudes.

Must stay result-identical to qclust._kernels.fallback; tests assert parity.
"""
from libc.math cimport fabs, pow, sqrt

import numpy as np

cimport numpy as cnp

cnp.import_array()


def max_pairwise_distance(double[:, ::1] coords, double p, bint chebyshev):
    """Exhaustive O(N^2) scan for the farthest pair under a Minkowski metric.

    Returns (i, j, distance) with i < j; ties resolve to the first pair in
    row-major order, i.e. the lexicographically smallest (i, j).
    """
    cdef Py_ssize_t n = coords.shape[0]
    cdef Py_ssize_t k = coords.shape[1]
    cdef Py_ssize_t i, j, f
    cdef Py_ssize_t best_i = 0, best_j = 1
    cdef double best = -1.0
    cdef double acc, d

    if n < 2:
        raise ValueError("need at least 2 points")

    with nogil:
        for i in range(n - 1):
            for j in range(i + 1, n):
                acc = 0.0
                if chebyshev:
                    for f in range(k):
                        d = fabs(coords[i, f] - coords[j, f])
                        if d > acc:
                            acc = d
                elif p == 2.0:
                    for f in range(k):
                        d = coords[i, f] - coords[j, f]
                        acc += d * d
                elif p == 1.0:
                    for f in range(k):
                        acc += fabs(coords[i, f] - coords[j, f])
                else:
                    for f in range(k):
                        acc += pow(fabs(coords[i, f] - coords[j, f]), p)
                if acc > best:
                    best = acc
                    best_i = i
                    best_j = j

    if chebyshev or p == 1.0:
        d = best
    elif p == 2.0:
        d = sqrt(best)
    else:
        d = pow(best, 1.0 / p)
    return best_i, best_j, d


def xor_fold_permutation(cnp.ndarray[cnp.complex128_t, ndim=1] amps, int n, int m):
    """Permute amplitudes by XOR-ing the m ancilla bits (low bits) with the
    top m bits of the n-bit distance register (high bits).

    Basis index layout: index = (code << m) | label. The permutation is an
    involution, so gather and scatter coincide.
    """
    cdef Py_ssize_t size = amps.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(size, dtype=np.complex128)
    cdef Py_ssize_t idx

    if size != (<Py_ssize_t>1) << (n + m):
        raise ValueError("amplitude length does not match register width")

    with nogil:
        for idx in range(size):
            out[idx] = amps[idx ^ (idx >> n)]
    return out
