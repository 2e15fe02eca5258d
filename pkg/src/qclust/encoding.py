"""Distance metrics, origin-relative integer distance codes, and the
bit-prefix cluster-boundary arithmetic.

Points are plain float arrays; a dataset is an (N, k) array. Codes are the
scaled distances from a chosen origin rounded to integers (half away from
zero) so they fit an n-qubit register, n = ceil(log2(max_code + 1)).
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from ._kernels import max_pairwise_distance

DEFAULT_MAX_QUBITS = 24


def max_qubits() -> int:
    """Register width cap; CLUSTER_MAX_QUBITS overrides the default of 24."""
    raw = os.environ.get("CLUSTER_MAX_QUBITS")
    if raw is None:
        return DEFAULT_MAX_QUBITS
    cap = int(raw)
    if cap < 1:
        raise ValueError(f"CLUSTER_MAX_QUBITS must be >= 1, got {cap}")
    return cap


@dataclass(frozen=True)
class Metric:
    """Minkowski order p >= 1, or the Chebyshev limit when p is None."""

    p: float | None = 2.0

    def __post_init__(self) -> None:
        if self.p is not None and self.p < 1:
            raise ValueError(f"Minkowski order must satisfy p >= 1, got {self.p}")

    @classmethod
    def euclidean(cls) -> "Metric":
        return cls(2.0)

    @classmethod
    def manhattan(cls) -> "Metric":
        return cls(1.0)

    @classmethod
    def chebyshev(cls) -> "Metric":
        return cls(None)

    @property
    def is_chebyshev(self) -> bool:
        return self.p is None

    def name(self) -> str:
        return "chebyshev" if self.p is None else f"minkowski-{self.p:g}"


def minkowski_distance(x, y, metric: Metric = Metric.euclidean()) -> float:
    """Distance between two feature vectors under the given metric."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    diff = np.abs(x - y)
    if metric.is_chebyshev:
        return float(diff.max())
    p = metric.p
    if p == 2.0:
        return float(np.sqrt(np.dot(diff, diff)))
    if p == 1.0:
        return float(diff.sum())
    return float((diff**p).sum() ** (1.0 / p))


def farthest_pair(points, metric: Metric = Metric.euclidean()) -> tuple[int, int, float]:
    """Exhaustive scan for a pair attaining the maximum pairwise distance.

    Returns (i, j, d_max) with i < j; ties break to the lexicographically
    smallest index pair.
    """
    coords = np.ascontiguousarray(points, dtype=float)
    if coords.ndim != 2 or coords.shape[0] < 2:
        raise ValueError("farthest_pair needs at least 2 points")
    p = 0.0 if metric.is_chebyshev else float(metric.p)
    i, j, d = max_pairwise_distance(coords, p, metric.is_chebyshev)
    return int(i), int(j), float(d)


def round_half_away(values: np.ndarray) -> np.ndarray:
    """Round to nearest integer with .5 going away from zero (all inputs >= 0)."""
    return np.floor(values + 0.5).astype(np.int64)


@dataclass(frozen=True)
class DistanceEncoding:
    """Integer distance codes of every point from the chosen origin.

    codes[i] = round(scale * distance(origin, point_i)); n is the register
    width needed to hold the largest code; d_max_raw is the unscaled maximum
    distance from the origin. origin_index is None when the origin is a
    fixed coordinate rather than a dataset point.
    """

    origin_index: int | None
    origin_coords: np.ndarray
    scale: float
    codes: np.ndarray
    n: int
    d_max_raw: float

    def __post_init__(self) -> None:
        if self.origin_index is not None and self.codes[self.origin_index] != 0:
            raise ValueError("origin point must encode to 0")
        if int(self.codes.max()) >= (1 << self.n):
            raise ValueError("code does not fit the register width")

    @property
    def max_code(self) -> int:
        return int(self.codes.max())

    def distinct_codes(self) -> np.ndarray:
        return np.unique(self.codes)


def register_width(max_code: int) -> int:
    """n = ceil(log2(max_code + 1)), at least 1; exact via bit_length."""
    return max(1, int(max_code).bit_length())


def origin_distances(points, origin, metric: Metric = Metric.euclidean(),
                     ) -> tuple[np.ndarray, int | None, np.ndarray]:
    """Distances of all points from an origin given as index or coordinates.

    Returns (distances, origin_index, origin_coords).
    """
    coords = np.asarray(points, dtype=float)
    if isinstance(origin, (int, np.integer)):
        origin_index: int | None = int(origin)
        if not 0 <= origin_index < coords.shape[0]:
            raise ValueError(
                f"origin index {origin_index} out of range for {coords.shape[0]} points"
            )
        origin_coords = coords[origin_index]
    else:
        origin_index = None
        origin_coords = np.asarray(origin, dtype=float)
        if origin_coords.shape != coords.shape[1:]:
            raise ValueError(
                f"origin has {origin_coords.shape[0]} coordinates, points have {coords.shape[1]}"
            )

    diff = np.abs(coords - origin_coords)
    if metric.is_chebyshev:
        dists = diff.max(axis=1)
    elif metric.p == 2.0:
        dists = np.sqrt(np.einsum("ij,ij->i", diff, diff))
    elif metric.p == 1.0:
        dists = diff.sum(axis=1)
    else:
        dists = (diff**metric.p).sum(axis=1) ** (1.0 / metric.p)
    return dists, origin_index, origin_coords


def encode_distances(points, origin, metric: Metric = Metric.euclidean(),
                     scale: float = 1.0) -> DistanceEncoding:
    """Scale and round each point's distance from the origin to an integer code.

    `origin` is a point index or a fixed coordinate vector.
    """
    if scale <= 0:
        raise ValueError(f"scale must be positive, got {scale}")
    dists, origin_index, origin_coords = origin_distances(points, origin, metric)

    codes = round_half_away(scale * dists)
    cap = max_qubits()
    n = register_width(int(codes.max()))
    if n > cap:
        worst = int(np.argmax(codes))
        raise ValueError(
            f"point {worst} encodes to {int(codes[worst])}, needing {n} qubits "
            f"(cap {cap}); reduce `scale` to fit"
        )
    return DistanceEncoding(
        origin_index=origin_index,
        origin_coords=origin_coords,
        scale=float(scale),
        codes=codes,
        n=n,
        d_max_raw=float(dists.max()),
    )


def ancilla_width(d_max: float, d_min_cluster: float) -> int:
    """m = ceil(log2(d_max / d_min_cluster)), at least 1.

    d_min_cluster is the pre-fixed cluster radius; 2^m label values cover
    the code range in intervals no wider than d_min_cluster's share.
    """
    if d_min_cluster <= 0 or d_max <= 0:
        raise ValueError("distances must be positive")
    if d_min_cluster > d_max:
        raise ValueError(f"cluster width {d_min_cluster} exceeds maximum distance {d_max}")
    return max(1, math.ceil(math.log2(d_max / d_min_cluster)))


@dataclass(frozen=True)
class ClusterBounds:
    """Inclusive code interval [d_min, d_max] owned by ancilla label t."""

    t: int
    d_min: int
    d_max: int


def cluster_bounds(t: int, n: int, m: int) -> ClusterBounds:
    """Code interval assigned to label t when the top m of n bits are the label.

    d_min = t * 2^(n-m) and d_max = (t+1) * 2^(n-m) - 1. For n = 2m this
    reproduces the published upper/lower-limit formulas exactly.
    """
    if m > n:
        raise ValueError(f"ancilla count {m} exceeds register width {n}")
    if not 0 <= t < (1 << m):
        raise ValueError(f"label {t} out of range for {m} ancillae")
    width = 1 << (n - m)
    return ClusterBounds(t=t, d_min=t * width, d_max=(t + 1) * width - 1)
