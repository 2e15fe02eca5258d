"""Unsharp-measurement clustering: Gaussian effect operators over the
distance codes, applied to a superposition of the unassigned codes; a point
joins the cluster when its code lies within kappa standard deviations of
the measured center.

Effects are diagonal in the code basis: E_i = sum_j w_i(j) |j><j| with
w_i(j) = exp(-(i-j)^2 / (2 delta^2)) / sqrt(2 pi delta^2). Raw weights do
not sum to the identity over a truncated code range, so
normalize_effect_family rescales each code column to make the family a
proper discrete POVM.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .encoding import DistanceEncoding, Metric, encode_distances, origin_distances
from .qhca import Clustering, OriginPolicy, refine_to_k, resolve_origin, resolve_scale, _interval_sorted
from .statevector import RegisterLayout, apply_effect, prepare_superposition


@dataclass(frozen=True)
class EffectOperator:
    """Diagonal nonnegative weights over the 2^n distance codes."""

    center: int
    delta: float
    weights: np.ndarray
    normalized: bool = False

    @property
    def n(self) -> int:
        return register_bits(self.weights.shape[0])


def register_bits(size: int) -> int:
    n = int(size).bit_length() - 1
    if 1 << n != size:
        raise ValueError(f"weight vector length {size} is not a power of two")
    return n


def build_effect(center: int, delta: float, n: int) -> EffectOperator:
    """Gaussian effect centered on a code, evaluated at every n-bit code."""
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    if not 0 <= center < (1 << n):
        raise ValueError(f"center {center} out of range for {n} qubits")
    j = np.arange(1 << n, dtype=float)
    weights = np.exp(-((center - j) ** 2) / (2.0 * delta**2)) / np.sqrt(2.0 * np.pi * delta**2)
    return EffectOperator(center=center, delta=float(delta), weights=weights)


def normalize_effect_family(n: int, delta: float) -> list[EffectOperator]:
    """All 2^n Gaussian effects, rescaled per code so they sum to identity.

    Column j of the (center x code) weight matrix is divided by its sum, so
    sum_i w_i(j) = 1 exactly and the family is a discrete POVM.
    """
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    size = 1 << n
    grid = np.arange(size, dtype=float)
    raw = np.exp(-((grid[:, None] - grid[None, :]) ** 2) / (2.0 * delta**2))
    raw /= np.sqrt(2.0 * np.pi * delta**2)
    normed = raw / raw.sum(axis=0, keepdims=True)
    return [
        EffectOperator(center=i, delta=float(delta), weights=normed[i], normalized=True)
        for i in range(size)
    ]


@dataclass(kw_only=True)
class UnsharpConfig:
    """Parameters for the iterative unsharp clustering run.

    delta is the Gaussian width in code units, or "auto" for
    max_code / (2 * target_k); kappa scales the membership window
    |center - code| <= kappa * delta. Center policy "lowest-unassigned"
    measures the smallest unassigned code each pass; "highest-amplitude"
    picks the code shared by the most unassigned points.
    """

    target_k: int = 2
    delta: float | str = "auto"
    kappa: float = 1.0
    center_policy: str = "lowest-unassigned"
    origin: OriginPolicy = "farthest-endpoint"
    scale: float | str = "auto"
    metric: Metric = field(default_factory=Metric.euclidean)
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.target_k < 1:
            raise ValueError(f"target_k must be >= 1, got {self.target_k}")
        if isinstance(self.delta, str):
            if self.delta != "auto":
                raise ValueError(f"delta must be a positive number or 'auto', got {self.delta!r}")
        elif self.delta <= 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if self.kappa <= 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        if self.center_policy not in ("lowest-unassigned", "highest-amplitude"):
            raise ValueError(f"unknown center policy {self.center_policy!r}")


def unsharp_step(encoding: DistanceEncoding, unassigned: set[int], center: int,
                 config: UnsharpConfig) -> set[int]:
    """Measure the superposed unassigned codes unsharply around `center`.

    Returns the point ids whose code j satisfies |center - j| <= kappa*delta,
    i.e. whose post-measurement weight ratio w_j / w_center stays at least
    exp(-kappa^2 / 2). The center's own points always qualify.
    """
    if not unassigned:
        raise ValueError("no unassigned points left")
    delta = config.delta
    if isinstance(delta, str):
        raise ValueError("delta must be resolved to a number before stepping")
    codes = encoding.codes
    live_codes = {int(codes[pid]) for pid in unassigned}
    if center not in live_codes:
        raise ValueError(f"center {center} is not the code of any unassigned point")

    layout = RegisterLayout(n=encoding.n, m=0)
    state = prepare_superposition(sorted(live_codes), layout, "uniform-distinct")
    effect = build_effect(center, delta, encoding.n)
    apply_effect(state, effect)  # validates the measurement; membership below

    window = config.kappa * delta
    return {pid for pid in unassigned if abs(int(codes[pid]) - center) <= window}


def unsharp_run(points, config: UnsharpConfig | None = None) -> Clustering:
    """Iteratively peel clusters off around measured centers, then refine.

    Each pass assigns at least the center's points, so the loop ends in at
    most N passes; the cluster count is then merged or split to target_k
    with the same interval rules as the register pipeline.
    """
    config = config or UnsharpConfig()
    coords = np.asarray(points, dtype=float)
    if coords.ndim != 2 or coords.shape[0] < 1:
        raise ValueError("unsharp clustering needs at least 1 point")

    if coords.shape[0] == 1:
        if config.target_k > 1:
            raise ValueError(f"target_k={config.target_k} exceeds the 1 distinct code")
        params = {"algorithm": "unsharp", "k": config.target_k}
        return Clustering(clusters=[(0, [0])], params=params)

    origin, origin_desc = resolve_origin(coords, config.origin, config.metric)
    d_max_raw = float(origin_distances(coords, origin, config.metric)[0].max())
    scale = resolve_scale(config.scale, d_max_raw, 0)
    encoding = encode_distances(coords, origin, config.metric, scale)

    delta = config.delta
    if delta == "auto":
        delta = max(encoding.max_code, 1) / (2.0 * config.target_k)
    resolved = UnsharpConfig(
        target_k=config.target_k, delta=float(delta), kappa=config.kappa,
        center_policy=config.center_policy, origin=config.origin,
        scale=config.scale, metric=config.metric, seed=config.seed,
    )

    codes = encoding.codes
    unassigned = set(range(coords.shape[0]))
    groups: list[list[int]] = []
    while unassigned:
        if config.center_policy == "lowest-unassigned":
            center = min(int(codes[pid]) for pid in unassigned)
        else:
            counts: dict[int, int] = {}
            for pid in unassigned:
                counts[int(codes[pid])] = counts.get(int(codes[pid]), 0) + 1
            center = max(sorted(counts), key=lambda c: counts[c])
        members = unsharp_step(encoding, unassigned, center, resolved)
        groups.append(sorted(members))
        unassigned -= members

    interim = Clustering(clusters=[(i, ms) for i, ms in enumerate(groups)])
    if len(groups) != config.target_k:
        if config.target_k > len(np.unique(codes)):
            raise ValueError(
                f"target_k={config.target_k} exceeds the "
                f"{len(np.unique(codes))} distinct codes"
            )
        interim = refine_to_k(interim, encoding, config.target_k)

    ordered = _interval_sorted([list(ms) for _, ms in interim.clusters], codes)
    params = {
        "algorithm": "unsharp",
        "metric": config.metric.name(),
        "origin": origin_desc,
        "origin_index": encoding.origin_index,
        "scale": encoding.scale,
        "n": encoding.n,
        "delta": float(delta),
        "kappa": config.kappa,
        "k": config.target_k,
        "center_policy": config.center_policy,
        "seed": config.seed,
    }
    return Clustering(clusters=[(i, ms) for i, ms in enumerate(ordered)], params=params)
