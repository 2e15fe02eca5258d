"""Classical companions: 2-D PCA, agglomerative and bisecting-divisive
baselines, and accuracy/purity scoring for labeled datasets.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .encoding import Metric, farthest_pair
from .qhca import Clustering


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    tn: int
    fp: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


@dataclass(frozen=True)
class PcaModel:
    """Mean/scale of the fitted features plus the top-2 component rows."""

    mean: np.ndarray
    components: np.ndarray          # (2, k), orthonormal rows
    explained_variance: np.ndarray  # (2,), nonincreasing
    feature_scale: np.ndarray | None = None

    def transform(self, data) -> np.ndarray:
        centered = np.asarray(data, dtype=float) - self.mean
        if self.feature_scale is not None:
            centered = centered / self.feature_scale
        return centered @ self.components.T


def jacobi_eigh(matrix: np.ndarray, tol: float = 1e-12, max_sweeps: int = 60,
                ) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi diagonalization of a symmetric matrix.

    Returns (eigenvalues, eigenvectors-as-columns) sorted by descending
    eigenvalue. Sweeps stop once every off-diagonal entry is at or below
    `tol` in absolute value.
    """
    a = np.array(matrix, dtype=float)
    k = a.shape[0]
    if a.shape != (k, k) or not np.allclose(a, a.T, atol=1e-9):
        raise ValueError("jacobi_eigh needs a symmetric square matrix")
    v = np.eye(k)

    for _ in range(max_sweeps):
        off = np.max(np.abs(a - np.diag(np.diag(a)))) if k > 1 else 0.0
        if off <= tol:
            break
        for p in range(k - 1):
            for q in range(p + 1, k):
                if abs(a[p, q]) <= tol:
                    continue
                theta = 0.5 * np.arctan2(2.0 * a[p, q], a[q, q] - a[p, p])
                c, s = np.cos(theta), np.sin(theta)
                rot_p = c * a[:, p] - s * a[:, q]
                rot_q = s * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = rot_p, rot_q
                rot_p = c * a[p, :] - s * a[q, :]
                rot_q = s * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = rot_p, rot_q
                rot_p = c * v[:, p] - s * v[:, q]
                rot_q = s * v[:, p] + c * v[:, q]
                v[:, p], v[:, q] = rot_p, rot_q

    values = np.diag(a).copy()
    order = np.argsort(values)[::-1]
    return values[order], v[:, order]


def pca_2d(data, standardize: bool = False) -> tuple[PcaModel, np.ndarray]:
    """Project onto the top-2 covariance eigenvectors.

    Sign convention: the largest-magnitude entry of each component is made
    positive, so the projection is reproducible across runs.
    """
    x = np.asarray(data, dtype=float)
    if x.ndim != 2 or x.shape[0] < 3:
        raise ValueError("pca_2d needs at least 3 points")
    if x.shape[1] < 2:
        raise ValueError("pca_2d needs at least 2 features")

    mean = x.mean(axis=0)
    centered = x - mean
    scale = None
    if standardize:
        scale = centered.std(axis=0)
        dead = np.nonzero(scale == 0.0)[0]
        if dead.size:
            raise ValueError(f"feature {int(dead[0])} has zero variance; cannot standardize")
        centered = centered / scale

    cov = centered.T @ centered / (x.shape[0] - 1)
    values, vectors = jacobi_eigh(cov)
    components = vectors[:, :2].T.copy()
    for row in components:
        if row[np.argmax(np.abs(row))] < 0:
            row *= -1.0

    model = PcaModel(
        mean=mean,
        components=components,
        explained_variance=values[:2].copy(),
        feature_scale=scale,
    )
    return model, centered @ components.T


def _pairwise(points: np.ndarray, metric: Metric) -> np.ndarray:
    diff = np.abs(points[:, None, :] - points[None, :, :])
    if metric.is_chebyshev:
        return diff.max(axis=2)
    if metric.p == 2.0:
        return np.sqrt((diff**2).sum(axis=2))
    if metric.p == 1.0:
        return diff.sum(axis=2)
    return (diff**metric.p).sum(axis=2) ** (1.0 / metric.p)


def agglomerative_baseline(points, k: int, linkage: str = "single",
                           metric: Metric = Metric.euclidean()) -> Clustering:
    """Bottom-up merging of the nearest cluster pair under the linkage.

    Clusters live in the slot of their smallest member, so the row-major
    argmin of the distance matrix breaks ties by smallest index pair.
    """
    if linkage not in ("single", "complete"):
        raise ValueError(f"unknown linkage {linkage!r}")
    coords = np.asarray(points, dtype=float)
    n = coords.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range for {n} points")

    dist = _pairwise(coords, metric)
    np.fill_diagonal(dist, np.inf)
    members: dict[int, list[int]] = {i: [i] for i in range(n)}
    combine = np.minimum if linkage == "single" else np.maximum

    while len(members) > k:
        flat = int(np.argmin(dist))
        a, b = divmod(flat, n)
        if a > b:
            a, b = b, a
        merged_row = combine(dist[a], dist[b])
        dist[a, :] = merged_row
        dist[:, a] = merged_row
        dist[a, a] = np.inf
        dist[b, :] = np.inf
        dist[:, b] = np.inf
        members[a] = sorted(members[a] + members[b])
        del members[b]

    clusters = [(i, members[slot]) for i, slot in enumerate(sorted(members))]
    params = {"algorithm": "agglomerative", "linkage": linkage, "k": k,
              "metric": metric.name()}
    return Clustering(clusters=clusters, params=params)


def _dist_to(points: np.ndarray, center: np.ndarray, metric: Metric) -> np.ndarray:
    diff = np.abs(points - center)
    if metric.is_chebyshev:
        return diff.max(axis=1)
    if metric.p == 2.0:
        return np.sqrt((diff**2).sum(axis=1))
    if metric.p == 1.0:
        return diff.sum(axis=1)
    return (diff**metric.p).sum(axis=1) ** (1.0 / metric.p)


def _bisect(coords: np.ndarray, ids: list[int], metric: Metric,
            max_iter: int = 100) -> tuple[list[int], list[int]]:
    """2-means bipartition seeded by the farthest pair; deterministic."""
    sub = coords[ids]
    i_far, j_far, d = farthest_pair(sub, metric)
    if d == 0.0:
        return [ids[0]], ids[1:]  # coincident points: peel the first off

    centers = np.stack([sub[i_far], sub[j_far]])
    assign = None
    for _round in range(max_iter):
        d0 = _dist_to(sub, centers[0], metric)
        d1 = _dist_to(sub, centers[1], metric)
        new_assign = (d1 < d0).astype(np.int64)  # ties stay with the first seed
        if assign is not None and np.array_equal(new_assign, assign):
            break
        assign = new_assign
        if assign.sum() in (0, len(ids)):
            break
        centers = np.stack([sub[assign == 0].mean(axis=0), sub[assign == 1].mean(axis=0)])

    left = [pid for pid, side in zip(ids, assign) if side == 0]
    right = [pid for pid, side in zip(ids, assign) if side == 1]
    if not left or not right:
        return [ids[0]], ids[1:]
    return left, right


def divisive_baseline(points, k: int, metric: Metric = Metric.euclidean()) -> Clustering:
    """Top-down bisecting scheme: repeatedly split the widest cluster.

    The cluster with the largest diameter (ties: smallest leading member)
    is bipartitioned 2-means-style, seeded by its farthest pair.
    """
    coords = np.asarray(points, dtype=float)
    n = coords.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range for {n} points")

    groups: list[list[int]] = [sorted(range(n))]
    while len(groups) < k:
        diameters = [
            farthest_pair(coords[ids], metric)[2] if len(ids) > 1 else -1.0
            for ids in groups
        ]
        at = int(np.argmax(diameters))
        left, right = _bisect(coords, groups[at], metric)
        groups[at:at + 1] = [sorted(left), sorted(right)]
        groups.sort(key=lambda ids: ids[0])

    clusters = [(i, ids) for i, ids in enumerate(groups)]
    params = {"algorithm": "divisive", "k": k, "metric": metric.name()}
    return Clustering(clusters=clusters, params=params)


def score_binary(clustering: Clustering, labels) -> tuple[ConfusionCounts, float]:
    """Majority-map each cluster to a class, then count the confusion cells.

    labels: per-point 1 for the positive class, 0 for the negative class.
    Clusters tied 50/50 map to the positive class.
    """
    y = np.asarray(labels).astype(np.int64)
    if clustering.n_points != y.shape[0]:
        raise ValueError(
            f"{y.shape[0]} labels for {clustering.n_points} clustered points"
        )
    tp = tn = fp = fn = 0
    for _, members in clustering.clusters:
        truth = y[members]
        positives = int(truth.sum())
        predicted_positive = positives * 2 >= len(members)
        if predicted_positive:
            tp += positives
            fp += len(members) - positives
        else:
            fn += positives
            tn += len(members) - positives
    counts = ConfusionCounts(tp=tp, tn=tn, fp=fp, fn=fn)
    return counts, (counts.tp + counts.tn) / counts.total


def ring_purity(clustering: Clustering, ring_labels) -> float:
    """Weighted mean over clusters of the majority-ring fraction."""
    y = np.asarray(ring_labels).astype(np.int64)
    if clustering.n_points != y.shape[0]:
        raise ValueError(
            f"{y.shape[0]} labels for {clustering.n_points} clustered points"
        )
    agreeing = 0
    for _, members in clustering.clusters:
        _, counts = np.unique(y[members], return_counts=True)
        agreeing += int(counts.max())
    return agreeing / y.shape[0]
