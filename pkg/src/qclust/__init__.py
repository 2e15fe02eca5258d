"""Measurement-based clustering on a simulated quantum register.

Two algorithms: bit-prefix cluster labeling via an ancilla-copy unitary
(qhca_run) and unsharp clustering via Gaussian effect operators
(unsharp_run), plus classical baselines, dataset ingestion, and metrics.
"""
from ._kernels import BACKEND
from .analysis import (
    ConfusionCounts,
    PcaModel,
    agglomerative_baseline,
    divisive_baseline,
    pca_2d,
    ring_purity,
    score_binary,
)
from .dataio import (
    CirclesSpec,
    Dataset,
    gen_circles,
    load_tsplib,
    load_wbc,
    load_wbc_csv,
    parse_tsplib,
    read_clustering,
    write_clustering,
)
from .encoding import (
    ClusterBounds,
    DistanceEncoding,
    Metric,
    ancilla_width,
    cluster_bounds,
    encode_distances,
    farthest_pair,
    minkowski_distance,
)
from .qhca import Clustering, QhcaConfig, extract_clusters, qhca_run, refine_to_k
from .statevector import (
    RegisterLayout,
    StateVector,
    apply_effect,
    apply_label_unitary,
    enumerate_outcomes,
    prepare_superposition,
    sample_outcomes,
)
from .svg import emit_svg_scatter
from .unsharp import (
    EffectOperator,
    UnsharpConfig,
    build_effect,
    normalize_effect_family,
    unsharp_run,
    unsharp_step,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CirclesSpec",
    "ClusterBounds",
    "Clustering",
    "ConfusionCounts",
    "Dataset",
    "DistanceEncoding",
    "EffectOperator",
    "Metric",
    "PcaModel",
    "QhcaConfig",
    "RegisterLayout",
    "StateVector",
    "UnsharpConfig",
    "agglomerative_baseline",
    "ancilla_width",
    "apply_effect",
    "apply_label_unitary",
    "build_effect",
    "cluster_bounds",
    "divisive_baseline",
    "emit_svg_scatter",
    "encode_distances",
    "enumerate_outcomes",
    "extract_clusters",
    "farthest_pair",
    "gen_circles",
    "load_tsplib",
    "load_wbc",
    "load_wbc_csv",
    "minkowski_distance",
    "normalize_effect_family",
    "parse_tsplib",
    "pca_2d",
    "prepare_superposition",
    "qhca_run",
    "read_clustering",
    "refine_to_k",
    "ring_purity",
    "sample_outcomes",
    "score_binary",
    "unsharp_run",
    "unsharp_step",
    "write_clustering",
]
