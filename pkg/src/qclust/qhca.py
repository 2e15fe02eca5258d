"""End-to-end divisive clustering on the simulated register: encode
distances from an origin, superpose, copy the top distance bits onto
ancillae, read the ancilla labels out as cluster ids, then merge or split
down to a requested cluster count.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .encoding import (
    DistanceEncoding,
    Metric,
    ancilla_width,
    encode_distances,
    farthest_pair,
    max_qubits,
    origin_distances,
    register_width,
    round_half_away,
)
from .statevector import (
    RegisterLayout,
    apply_label_unitary,
    enumerate_outcomes,
    prepare_superposition,
    sample_outcomes,
)

OriginPolicy = Union[str, int, tuple]


@dataclass
class Clustering:
    """A labeled partition of point indices plus the run parameters."""

    clusters: list[tuple[int, list[int]]]
    params: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        seen: set[int] = set()
        labels: set[int] = set()
        for label, members in self.clusters:
            if not members:
                raise ValueError(f"cluster {label} has no members")
            if label in labels:
                raise ValueError(f"duplicate cluster label {label}")
            labels.add(label)
            for pid in members:
                if pid in seen:
                    raise ValueError(f"point {pid} assigned to more than one cluster")
                seen.add(pid)

    @property
    def assignments(self) -> dict[int, int]:
        return {pid: label for label, members in self.clusters for pid in members}

    @property
    def n_clusters(self) -> int:
        return len(self.clusters)

    @property
    def n_points(self) -> int:
        return sum(len(members) for _, members in self.clusters)

    def labels_array(self) -> np.ndarray:
        """Per-point cluster labels, indexed by point id 0..N-1."""
        out = np.full(self.n_points, -1, dtype=np.int64)
        for label, members in self.clusters:
            for pid in members:
                if pid >= out.shape[0]:
                    raise ValueError("point ids are not contiguous from 0")
                out[pid] = label
        if (out < 0).any():
            raise ValueError("point ids are not contiguous from 0")
        return out

    def relabeled(self) -> "Clustering":
        """Same partition with labels renumbered 0..k-1 in current order."""
        clusters = [(i, list(members)) for i, (_, members) in enumerate(self.clusters)]
        return Clustering(clusters=clusters, params=dict(self.params))


@dataclass(kw_only=True)
class QhcaConfig:
    """Run parameters for the register-labeling pipeline.

    Exactly one of `ancillae` (explicit m) or `d_min_cluster` (pre-fixed
    cluster radius, raw distance units) selects the ancilla count; with
    neither, m defaults to 1. `scale` is either an explicit factor or
    "auto": keep scale 1 unless the codes would overflow the qubit cap, in
    which case scale down just enough to fit.
    """

    target_k: int | str = "all-nonempty"
    ancillae: int | None = None
    d_min_cluster: float | None = None
    origin: OriginPolicy = "farthest-endpoint"
    scale: float | str = "auto"
    weighting: str = "uniform-distinct"
    metric: Metric = field(default_factory=Metric.euclidean)
    shots: int | None = None
    seed: int | None = None

    def __post_init__(self) -> None:
        if isinstance(self.target_k, str) and self.target_k != "all-nonempty":
            raise ValueError(f"target_k must be an integer or 'all-nonempty', got {self.target_k!r}")
        if isinstance(self.target_k, int) and self.target_k < 1:
            raise ValueError(f"target_k must be >= 1, got {self.target_k}")
        if self.ancillae is not None and self.d_min_cluster is not None:
            raise ValueError("give either ancillae or d_min_cluster, not both")
        if self.ancillae is not None and self.ancillae < 1:
            raise ValueError(f"ancillae must be >= 1, got {self.ancillae}")
        if isinstance(self.scale, str) and self.scale != "auto":
            raise ValueError(f"scale must be a positive number or 'auto', got {self.scale!r}")


def resolve_origin(points: np.ndarray, policy: OriginPolicy,
                   metric: Metric) -> tuple[int | np.ndarray, str]:
    """Turn an origin policy into an encode_distances origin argument.

    Policies: "farthest-endpoint" (first endpoint of the farthest pair),
    "index:<i>" or a bare int, and "fixed:<x>,<y>,..." or a coordinate tuple.
    Returns (origin, canonical policy string).
    """
    if isinstance(policy, str):
        if policy == "farthest-endpoint":
            k1, _, _ = farthest_pair(points, metric)
            return k1, "farthest-endpoint"
        if policy.startswith("index:"):
            return int(policy[len("index:"):]), policy
        if policy.startswith("fixed:"):
            coords = np.array([float(v) for v in policy[len("fixed:"):].split(",")])
            return coords, policy
        raise ValueError(f"unknown origin policy {policy!r}")
    if isinstance(policy, (int, np.integer)):
        return int(policy), f"index:{int(policy)}"
    coords = np.asarray(policy, dtype=float)
    return coords, "fixed:" + ",".join(f"{v:g}" for v in coords)


def resolve_scale(scale: float | str, d_max_raw: float, m: int) -> float:
    """Explicit factor, or auto: shrink only if codes would exceed the cap."""
    if scale != "auto":
        value = float(scale)
        if value <= 0:
            raise ValueError(f"scale must be positive, got {value}")
        return value
    if d_max_raw == 0.0:
        return 1.0
    cap_n = max_qubits() - m
    if cap_n < 1:
        raise ValueError(f"{m} ancillae leave no room for distance qubits under the cap")
    if register_width(int(round_half_away(np.array([d_max_raw]))[0])) <= cap_n:
        return 1.0
    return ((1 << cap_n) - 1) / d_max_raw


def extract_clusters(outcomes: dict[tuple[int, int], float],
                     encoding: DistanceEncoding) -> Clustering:
    """Group points by the ancilla label their distance code came out with.

    Equivalent to classical bucketing by cluster_bounds. Labels are the raw
    ancilla values; empty labels simply do not appear.
    """
    code_to_label: dict[int, int] = {}
    for (code, label), _prob in outcomes.items():
        code_to_label[code] = label

    members: dict[int, list[int]] = {}
    for pid, code in enumerate(encoding.codes):
        label = code_to_label.get(int(code))
        if label is None:
            raise ValueError(f"code {int(code)} of point {pid} has zero outcome probability")
        members.setdefault(label, []).append(pid)

    clusters = [(label, sorted(pids)) for label, pids in sorted(members.items())]
    return Clustering(clusters=clusters)


def _interval_sorted(clusters: list[list[int]], codes: np.ndarray) -> list[list[int]]:
    return sorted(clusters, key=lambda ms: int(codes[ms].min()))


def refine_to_k(clustering: Clustering, encoding: DistanceEncoding, target_k: int) -> Clustering:
    """Merge or split clusters until exactly target_k remain.

    Merges join the adjacent pair (in code order) with the smallest gap
    between their nearest codes; splits divide the widest-range cluster at
    its widest internal code gap. Ties resolve to the lowest-interval
    cluster, so the result is deterministic.
    """
    if target_k < 1:
        raise ValueError(f"target_k must be >= 1, got {target_k}")
    codes = encoding.codes
    distinct_total = len(np.unique(codes))
    if target_k > distinct_total:
        raise ValueError(
            f"cannot form {target_k} clusters from {distinct_total} distinct codes"
        )

    groups = _interval_sorted([list(members) for _, members in clustering.clusters], codes)

    while len(groups) > target_k:
        gaps = [
            int(codes[groups[i + 1]].min()) - int(codes[groups[i]].max())
            for i in range(len(groups) - 1)
        ]
        at = int(np.argmin(gaps))
        groups[at:at + 2] = [sorted(groups[at] + groups[at + 1])]
        groups = _interval_sorted(groups, codes)

    while len(groups) < target_k:
        ranges = [int(codes[ms].max()) - int(codes[ms].min()) for ms in groups]
        at = int(np.argmax(ranges))
        cs = sorted(set(int(codes[p]) for p in groups[at]))
        internal = [cs[i + 1] - cs[i] for i in range(len(cs) - 1)]
        cut = int(np.argmax(internal))
        low = [p for p in groups[at] if codes[p] <= cs[cut]]
        high = [p for p in groups[at] if codes[p] > cs[cut]]
        groups[at:at + 1] = [sorted(low), sorted(high)]
        groups = _interval_sorted(groups, codes)

    clusters = [(i, members) for i, members in enumerate(groups)]
    return Clustering(clusters=clusters, params=dict(clustering.params))


def qhca_run(points, config: QhcaConfig | None = None) -> Clustering:
    """Full pipeline: origin, codes, superposition, label unitary, readout,
    then refinement to the requested cluster count.

    Labels in the result are dense 0..k-1 in code order; the raw ancilla
    labels live on in params["ancilla_labels"].
    """
    config = config or QhcaConfig()
    coords = np.asarray(points, dtype=float)
    if coords.ndim != 2 or coords.shape[0] < 2:
        raise ValueError("qhca needs at least 2 points")

    origin, origin_desc = resolve_origin(coords, config.origin, config.metric)
    d_max_raw = float(origin_distances(coords, origin, config.metric)[0].max())

    if config.ancillae is not None:
        m = config.ancillae
    elif config.d_min_cluster is not None:
        if d_max_raw == 0.0:
            m = 1
        else:
            m = ancilla_width(d_max_raw, config.d_min_cluster)
    else:
        m = 1

    scale = resolve_scale(config.scale, d_max_raw, m)
    encoding = encode_distances(coords, origin, config.metric, scale)
    m_eff = min(m, encoding.n)  # cannot copy more label bits than distance bits

    layout = RegisterLayout(n=encoding.n, m=m_eff)
    state = prepare_superposition(encoding.codes.tolist(), layout, config.weighting)
    state = apply_label_unitary(state)

    if config.shots is None:
        outcomes = enumerate_outcomes(state)
    else:
        seed = 0 if config.seed is None else config.seed
        counts = sample_outcomes(state, config.shots, seed)
        total = sum(counts.values())
        outcomes = {key: cnt / total for key, cnt in counts.items()}

    raw = extract_clusters(outcomes, encoding)

    if config.target_k == "all-nonempty":
        refined = raw
    else:
        if config.target_k > len(np.unique(encoding.codes)):
            raise ValueError(
                f"target_k={config.target_k} exceeds the "
                f"{len(np.unique(encoding.codes))} distinct codes"
            )
        refined = refine_to_k(raw, encoding, config.target_k)

    ordered = _interval_sorted([list(ms) for _, ms in refined.clusters], encoding.codes)
    params = {
        "algorithm": "qhca",
        "metric": config.metric.name(),
        "origin": origin_desc,
        "origin_index": encoding.origin_index,
        "scale": encoding.scale,
        "n": encoding.n,
        "m": m_eff,
        "ancillae": m_eff,  # resolved flag value, so sidecars replay exactly
        "k": config.target_k,
        "weighting": config.weighting,
        "seed": config.seed,
        "shots": config.shots,
        "ancilla_labels": [label for label, _ in raw.clusters],
    }
    return Clustering(clusters=[(i, ms) for i, ms in enumerate(ordered)], params=params)
