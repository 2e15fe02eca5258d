"""Command-line entry point: reproducible clustering runs and benchmarks.

Subcommands mirror the algorithms (qhca, unsharp, agglomerative, divisive)
plus `bench` for wall-time scaling tables. A flat JSON config file can seed
any flag (explicit flags win), and the JSON sidecar written next to a run's
CSV is itself a valid config, so every run can be replayed exactly.

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from statistics import median

import numpy as np

from .analysis import agglomerative_baseline, divisive_baseline, pca_2d, ring_purity, score_binary
from .dataio import CirclesSpec, Dataset, gen_circles, load_tsplib, load_wbc, write_clustering
from .qhca import Clustering, QhcaConfig, qhca_run
from .svg import emit_svg_scatter
from .unsharp import UnsharpConfig, unsharp_run

ALGORITHMS = ("qhca", "unsharp", "agglomerative", "divisive")


@dataclass(kw_only=True)
class RunConfig:
    """One clustering run: dataset source, algorithm parameters, outputs."""

    algorithm: str
    circles: str | None = None
    tsplib: str | None = None
    wbc: str | None = None
    missing: str = "drop"
    pca: bool = False
    standardize: bool | None = None
    k: int | str | None = None
    ancillae: int | None = None
    d_min: float | None = None
    delta: float | str = "auto"
    kappa: float = 1.0
    scale: float | str = "auto"
    origin: str = "farthest-endpoint"
    weighting: str = "uniform-distinct"
    center_policy: str = "lowest-unassigned"
    linkage: str = "complete"
    shots: int | None = None
    seed: int | None = None
    csv: str | None = None
    svg: str | None = None
    metrics: str | None = None

    def __post_init__(self) -> None:
        sources = [s for s in (self.circles, self.tsplib, self.wbc) if s is not None]
        if len(sources) != 1:
            raise ValueError("exactly one dataset source (circles, tsplib, wbc) is required")


def parse_circles_spec(text: str, default_seed: int | None = None) -> CirclesSpec:
    """Parse 'n=400,factor=0.5,noise=0.1,seed=7' into a CirclesSpec."""
    fields = {}
    for part in text.split(","):
        key, _, value = part.partition("=")
        if not value:
            raise ValueError(f"circles spec entry {part!r} is not key=value")
        fields[key.strip()] = value.strip()
    known = {"n", "factor", "noise", "seed"}
    unknown = set(fields) - known
    if unknown:
        raise ValueError(f"unknown circles keys {sorted(unknown)}; expected {sorted(known)}")
    seed = int(fields["seed"]) if "seed" in fields else default_seed
    if seed is None:
        raise ValueError("circles spec needs a seed for reproducibility")
    return CirclesSpec(
        n_samples=int(fields.get("n", 400)),
        factor=float(fields.get("factor", 0.5)),
        noise_sigma=float(fields.get("noise", 0.1)),
        seed=seed,
    )


def load_dataset(config: RunConfig) -> Dataset:
    if config.circles is not None:
        return gen_circles(parse_circles_spec(config.circles, default_seed=config.seed))
    if config.tsplib is not None:
        return load_tsplib(config.tsplib)
    return load_wbc(config.wbc, config.missing)


def _parse_k(value: str) -> int | str:
    if value == "all-nonempty":
        return value
    return int(value)


def _parse_scale(value: str) -> float | str:
    return value if value == "auto" else float(value)


def _parse_delta(value: str) -> float | str:
    return value if value == "auto" else float(value)


def run_algorithm(config: RunConfig, points: np.ndarray) -> Clustering:
    if config.algorithm == "qhca":
        return qhca_run(points, QhcaConfig(
            target_k=config.k if config.k is not None else "all-nonempty",
            ancillae=config.ancillae,
            d_min_cluster=config.d_min,
            origin=config.origin,
            scale=config.scale,
            weighting=config.weighting,
            shots=config.shots,
            seed=config.seed,
        ))
    if config.algorithm == "unsharp":
        return unsharp_run(points, UnsharpConfig(
            target_k=config.k if config.k is not None else 2,
            delta=config.delta,
            kappa=config.kappa,
            center_policy=config.center_policy,
            origin=config.origin,
            scale=config.scale,
            seed=config.seed,
        ))
    k = config.k if config.k is not None else 2
    if not isinstance(k, int):
        raise ValueError(f"{config.algorithm} needs an integer k, got {k!r}")
    if config.algorithm == "agglomerative":
        return agglomerative_baseline(points, k, config.linkage)
    if config.algorithm == "divisive":
        return divisive_baseline(points, k)
    raise ValueError(f"unknown algorithm {config.algorithm!r}")


def execute(config: RunConfig) -> tuple[int, dict]:
    """Run ingestion -> optional PCA -> algorithm -> scoring -> outputs.

    Returns (exit status, metrics record); prints the one-line summary to
    stdout. The metrics record excludes wall time so identical runs write
    identical bytes.
    """
    started = time.perf_counter()
    dataset = load_dataset(config)

    standardize = config.standardize
    if standardize is None:
        standardize = config.wbc is not None
    if config.pca:
        _, projected = pca_2d(dataset.points, standardize=standardize)
        dataset = Dataset(
            name=dataset.name, points=projected, labels=dataset.labels,
            provenance=dataset.provenance,
        )

    clustering = run_algorithm(config, dataset.points)

    metrics: dict = {
        "algorithm": config.algorithm,
        "n_points": dataset.n_points,
        "k": clustering.n_clusters,
    }
    for key in ("n", "m", "delta", "kappa", "scale", "origin", "weighting", "linkage",
                "center_policy", "seed", "shots"):
        if key in clustering.params:
            metrics[key] = clustering.params[key]
    if dataset.labels is not None:
        labels = np.asarray(dataset.labels)
        metrics["purity"] = ring_purity(clustering, labels)
        if set(np.unique(labels).tolist()) <= {0, 1}:
            _, accuracy = score_binary(clustering, labels)
            metrics["accuracy"] = accuracy

    # Provenance sufficient to re-run lands in the sidecar/config loop.
    clustering.params["pca"] = config.pca
    clustering.params["standardize"] = standardize
    if config.circles is not None:
        clustering.params["circles"] = config.circles
        if "seed=" not in config.circles and config.seed is not None:
            clustering.params["circles"] += f",seed={config.seed}"
    elif config.tsplib is not None:
        clustering.params["tsplib"] = config.tsplib
    else:
        clustering.params["wbc"] = config.wbc
        clustering.params["missing"] = config.missing
    if config.algorithm == "agglomerative":
        clustering.params["linkage"] = config.linkage

    if config.csv:
        write_clustering(clustering, dataset, config.csv)
    if config.svg:
        emit_svg_scatter(dataset, clustering, config.svg)
    if config.metrics:
        Path(config.metrics).write_text(
            json.dumps(metrics, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )

    elapsed = time.perf_counter() - started
    bits = [f"{config.algorithm}:", f"N={dataset.n_points}", f"k={clustering.n_clusters}"]
    if "n" in clustering.params:
        bits.append(f"n={clustering.params['n']}")
    if "m" in clustering.params:
        bits.append(f"m={clustering.params['m']}")
    if "purity" in metrics:
        bits.append(f"purity={metrics['purity']:.4f}")
    if "accuracy" in metrics:
        bits.append(f"accuracy={metrics['accuracy']:.4f}")
    bits.append(f"time={elapsed:.3f}s")
    print(" ".join(bits))
    return 0, metrics


def _time_once(func) -> float:
    start = time.perf_counter()
    func()
    return time.perf_counter() - start


def _time_autorange(func, budget: float = 0.05, max_runs: int = 25) -> float:
    """Median single-run time, repeating until the budget is spent."""
    times = [_time_once(func)]
    while sum(times) < budget and len(times) < max_runs:
        times.append(_time_once(func))
    return median(times)


def bench(config: RunConfig, sizes: list[int], algorithms: list[str] | None = None,
          ) -> list[tuple[str, int, float]]:
    """Wall-time scaling over synthetic circles datasets of the given sizes."""
    algorithms = algorithms or list(ALGORITHMS)
    seed = config.seed if config.seed is not None else 0
    rows: list[tuple[str, int, float]] = []
    for algo in algorithms:
        if algo not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {algo!r}")
        for size in sizes:
            spec_str = f"n={size},factor=0.5,noise=0.1,seed={seed}"
            run_cfg = RunConfig(
                algorithm=algo, circles=spec_str, seed=seed, k=2,
                ancillae=2 if algo == "qhca" else None,
                scale=10.0,
            )
            if algo == "qhca":
                run_cfg.k = "all-nonempty"
            dataset = load_dataset(run_cfg)
            seconds = _time_autorange(lambda: run_algorithm(run_cfg, dataset.points))
            rows.append((algo, size, seconds))
    return rows


def write_bench_csv(rows: list[tuple[str, int, float]], path: str | Path) -> None:
    lines = ["algorithm,n_points,seconds"]
    lines += [f"{algo},{size},{seconds:.6f}" for algo, size, seconds in rows]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _add_common_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--circles", metavar="SPEC",
                     help="synthetic source, e.g. n=400,factor=0.5,noise=0.1,seed=7")
    sub.add_argument("--tsplib", metavar="PATH", help="TSPLIB EUC_2D instance")
    sub.add_argument("--wbc", metavar="PATH", help="Wisconsin breast-cancer CSV")
    sub.add_argument("--missing", choices=("drop", "impute-mode"), default="drop",
                     help="WBC missing-value policy")
    sub.add_argument("--pca", action="store_true", help="reduce to 2-D before clustering")
    sub.add_argument("--standardize", action=argparse.BooleanOptionalAction, default=None,
                     help="standardize features for PCA (default: on for --wbc)")
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--csv", metavar="PATH", help="write assignments + JSON sidecar")
    sub.add_argument("--svg", metavar="PATH", help="write a scatter plot")
    sub.add_argument("--metrics", metavar="PATH", help="write the metrics record as JSON")
    sub.add_argument("--config", metavar="PATH",
                     help="flat JSON config (a run sidecar works); explicit flags win")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cluster",
        description="Measurement-based clustering on a simulated quantum register",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    qhca = subs.add_parser("qhca", help="register-labeling divisive clustering")
    qhca.add_argument("--k", type=_parse_k, default=None,
                      help="target cluster count or 'all-nonempty' (default)")
    qhca.add_argument("--ancillae", type=int, default=None, help="explicit label-qubit count m")
    qhca.add_argument("--d-min", type=float, default=None, dest="d_min",
                      help="pre-fixed cluster radius; sets m = ceil(log2(d_max/d_min))")
    qhca.add_argument("--scale", type=_parse_scale, default="auto")
    qhca.add_argument("--origin", default="farthest-endpoint",
                      help="farthest-endpoint | index:<i> | fixed:<x>,<y>,...")
    qhca.add_argument("--weighting", choices=("uniform-distinct", "multiplicity"),
                      default="uniform-distinct")
    qhca.add_argument("--shots", type=int, default=None,
                      help="finite-shot readout instead of exact enumeration")
    _add_common_flags(qhca)

    unsharp = subs.add_parser("unsharp", help="Gaussian-effect unsharp clustering")
    unsharp.add_argument("--k", type=int, default=2)
    unsharp.add_argument("--delta", type=_parse_delta, default="auto",
                         help="Gaussian width in code units, or 'auto'")
    unsharp.add_argument("--kappa", type=float, default=1.0,
                         help="membership window multiplier")
    unsharp.add_argument("--scale", type=_parse_scale, default="auto")
    unsharp.add_argument("--origin", default="farthest-endpoint")
    unsharp.add_argument("--center-policy", dest="center_policy",
                         choices=("lowest-unassigned", "highest-amplitude"),
                         default="lowest-unassigned")
    _add_common_flags(unsharp)

    agg = subs.add_parser("agglomerative", help="classical bottom-up baseline")
    agg.add_argument("--k", type=int, default=2)
    agg.add_argument("--linkage", choices=("single", "complete"), default="complete")
    _add_common_flags(agg)

    div = subs.add_parser("divisive", help="classical bisecting baseline")
    div.add_argument("--k", type=int, default=2)
    _add_common_flags(div)

    bench_p = subs.add_parser("bench", help="wall-time scaling on synthetic circles")
    bench_p.add_argument("--sizes", default="100,200,400",
                         help="comma-separated dataset sizes")
    bench_p.add_argument("--algorithms", default=",".join(ALGORITHMS),
                         help="comma-separated subset of " + ",".join(ALGORITHMS))
    bench_p.add_argument("--seed", type=int, default=0)
    bench_p.add_argument("--csv", metavar="PATH", help="write the scaling table as CSV")

    parser.subcommands = {"qhca": qhca, "unsharp": unsharp, "agglomerative": agg,
                          "divisive": div, "bench": bench_p}
    return parser


def _apply_config_file(parser: argparse.ArgumentParser, argv: list[str]) -> None:
    """Seed subcommand defaults from --config JSON so explicit flags still win.

    Defaults must land on the subcommand's parser: subparsers build a fresh
    namespace, so parent-level defaults would be clobbered.
    """
    peek = argparse.ArgumentParser(add_help=False)
    peek.add_argument("--config")
    known, _ = peek.parse_known_args(argv)
    if not known.config:
        return
    raw = json.loads(Path(known.config).read_text(encoding="utf-8"))
    if not isinstance(raw, dict):
        parser.error(f"config {known.config} must hold a JSON object")
    command = argv[0] if argv else None
    target = parser.subcommands.get(command, parser)
    defaults = {}
    for key, value in raw.items():
        if key == "algorithm":
            if command is not None and value != command:
                parser.error(f"config is for algorithm {value!r}, not {command!r}")
            continue
        if key in ("dataset", "n", "m", "origin_index", "ancilla_labels"):
            continue  # derived sidecar fields, not flags
        defaults[key.replace("-", "_")] = value
    target.set_defaults(**defaults)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config_file(parser, argv)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"cluster: cannot read config: {exc}", file=sys.stderr)
        return 1
    args = parser.parse_args(argv)

    try:
        if args.command == "bench":
            sizes = [int(s) for s in str(args.sizes).split(",") if s]
            algorithms = [a for a in str(args.algorithms).split(",") if a]
            cfg = RunConfig(algorithm="qhca", circles="n=2,seed=0", seed=args.seed)
            rows = bench(cfg, sizes, algorithms)
            for algo, size, seconds in rows:
                print(f"{algo} N={size} {seconds:.6f}s")
            if args.csv:
                write_bench_csv(rows, args.csv)
            return 0

        sources = [s for s in (args.circles, args.tsplib, args.wbc) if s is not None]
        if len(sources) != 1:
            parser.error("exactly one dataset source (--circles, --tsplib, --wbc) is required")
        if getattr(args, "ancillae", None) is not None and getattr(args, "d_min", None) is not None:
            parser.error("--ancillae and --d-min are mutually exclusive")

        config = RunConfig(
            algorithm=args.command,
            circles=args.circles,
            tsplib=args.tsplib,
            wbc=args.wbc,
            missing=args.missing,
            pca=args.pca,
            standardize=args.standardize,
            k=getattr(args, "k", None),
            ancillae=getattr(args, "ancillae", None),
            d_min=getattr(args, "d_min", None),
            delta=getattr(args, "delta", "auto"),
            kappa=getattr(args, "kappa", 1.0),
            scale=getattr(args, "scale", "auto"),
            origin=getattr(args, "origin", "farthest-endpoint"),
            weighting=getattr(args, "weighting", "uniform-distinct"),
            center_policy=getattr(args, "center_policy", "lowest-unassigned"),
            linkage=getattr(args, "linkage", "complete"),
            shots=getattr(args, "shots", None),
            seed=args.seed,
            csv=args.csv,
            svg=args.svg,
            metrics=args.metrics,
        )
        status, _ = execute(config)
        return status
    except (ValueError, OSError) as exc:
        print(f"cluster: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
