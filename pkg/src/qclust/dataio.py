"""Dataset ingestion and persistence: TSPLIB node-coordinate files, the
Wisconsin breast-cancer CSV, the synthetic concentric-circles generator,
and clustering output (CSV + JSON sidecar).

All text I/O is UTF-8 with \n newlines; writers are byte-deterministic for
identical inputs.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .qhca import Clustering


class ParseError(ValueError):
    """Malformed input file; message carries the 1-based line number."""


@dataclass
class Dataset:
    """Feature matrix plus optional per-point labels and provenance."""

    name: str
    points: np.ndarray
    labels: np.ndarray | None = None
    provenance: str = ""

    def __post_init__(self) -> None:
        self.points = np.asarray(self.points, dtype=float)
        if self.points.ndim != 2:
            raise ValueError("points must be a 2-D array")
        if not np.isfinite(self.points).all():
            raise ValueError("points must be finite")
        if self.labels is not None:
            self.labels = np.asarray(self.labels)
            if self.labels.shape[0] != self.points.shape[0]:
                raise ValueError("labels length must match point count")

    @property
    def n_points(self) -> int:
        return int(self.points.shape[0])

    @property
    def n_features(self) -> int:
        return int(self.points.shape[1])


def parse_tsplib(text: str, name_hint: str = "<stream>") -> Dataset:
    """Parse a EUC_2D TSPLIB node-coordinate instance.

    Header is key:value lines; coordinates follow NODE_COORD_SECTION as
    "index x y" rows; an EOF terminator is optional. Other edge-weight
    types are rejected.
    """
    header: dict[str, str] = {}
    coords: list[tuple[float, float]] = []
    in_coords = False

    lines = text.splitlines()
    if not any(line.strip() for line in lines):
        raise ParseError("line 1: empty TSPLIB stream")

    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line == "EOF":
            continue
        if not in_coords:
            if line == "NODE_COORD_SECTION":
                in_coords = True
                continue
            if ":" in line:
                key, _, value = line.partition(":")
                header[key.strip().upper()] = value.strip()
                continue
            raise ParseError(f"line {lineno}: expected 'KEY: VALUE' header, got {line!r}")
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(f"line {lineno}: expected 'index x y', got {line!r}")
        try:
            coords.append((float(parts[1]), float(parts[2])))
        except ValueError:
            raise ParseError(f"line {lineno}: non-numeric coordinate in {line!r}") from None

    if not in_coords:
        raise ParseError(f"line {len(lines)}: missing NODE_COORD_SECTION")
    weight_type = header.get("EDGE_WEIGHT_TYPE", "")
    if weight_type != "EUC_2D":
        raise ParseError(f"line 1: unsupported EDGE_WEIGHT_TYPE {weight_type!r}; only EUC_2D")
    if "DIMENSION" not in header:
        raise ParseError("line 1: missing DIMENSION header")
    dimension = int(header["DIMENSION"])
    if dimension != len(coords):
        raise ParseError(
            f"line {len(lines)}: DIMENSION {dimension} but {len(coords)} coordinate rows"
        )

    return Dataset(
        name=header.get("NAME", name_hint),
        points=np.array(coords, dtype=float),
        provenance=name_hint,
    )


def load_tsplib(path: str | Path) -> Dataset:
    path = Path(path)
    return parse_tsplib(path.read_text(encoding="utf-8"), name_hint=str(path))


def format_tsplib(dataset: Dataset) -> str:
    """Serialize back to TSPLIB text; coordinates round-trip exactly via repr."""
    if dataset.n_features != 2:
        raise ValueError("TSPLIB node-coordinate format is 2-D only")
    lines = [
        f"NAME: {dataset.name}",
        "TYPE: TSP",
        f"DIMENSION: {dataset.n_points}",
        "EDGE_WEIGHT_TYPE: EUC_2D",
        "NODE_COORD_SECTION",
    ]
    for i, (x, y) in enumerate(dataset.points, start=1):
        lines.append(f"{i} {float(x)!r} {float(y)!r}")
    lines.append("EOF")
    return "\n".join(lines) + "\n"


def load_wbc_csv(text: str, missing_policy: str = "drop",
                 name_hint: str = "<stream>") -> Dataset:
    """Load the UCI Wisconsin breast-cancer file (id, 9 attributes, class).

    Attribute values are 1..10 with '?' marking missing entries; class 2 is
    benign (positive, label 1) and 4 malignant (negative, label 0).
    missing_policy "drop" removes rows with any '?'; "impute-mode" replaces
    each '?' with its column's most frequent value (ties: smallest).
    """
    if missing_policy not in ("drop", "impute-mode"):
        raise ValueError(f"unknown missing policy {missing_policy!r}")

    rows: list[list[int | None]] = []
    labels: list[int] = []
    saw_row = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        saw_row = True
        parts = line.split(",")
        if len(parts) != 11:
            raise ParseError(f"row {lineno}: expected 11 comma-separated fields, got {len(parts)}")
        attrs: list[int | None] = []
        for field in parts[1:10]:
            if field == "?":
                attrs.append(None)
                continue
            try:
                attrs.append(int(field))
            except ValueError:
                raise ParseError(f"row {lineno}: non-integer attribute {field!r}") from None
        try:
            klass = int(parts[10])
        except ValueError:
            raise ParseError(f"row {lineno}: non-integer class code {parts[10]!r}") from None
        if klass == 2:
            labels.append(1)
        elif klass == 4:
            labels.append(0)
        else:
            raise ParseError(f"row {lineno}: unknown class code {klass}")
        rows.append(attrs)

    if not saw_row:
        raise ParseError("row 1: empty WBC stream")

    if missing_policy == "drop":
        kept = [i for i, attrs in enumerate(rows) if None not in attrs]
        matrix = np.array([rows[i] for i in kept], dtype=float)
        kept_labels = np.array([labels[i] for i in kept], dtype=np.int64)
    else:
        columns = list(zip(*rows))
        modes: list[int] = []
        for col in columns:
            present = [v for v in col if v is not None]
            values, counts = np.unique(present, return_counts=True)
            modes.append(int(values[np.argmax(counts)]))  # first max = smallest value
        matrix = np.array(
            [[v if v is not None else modes[j] for j, v in enumerate(attrs)] for attrs in rows],
            dtype=float,
        )
        kept_labels = np.array(labels, dtype=np.int64)

    if matrix.shape[0] == 0:
        raise ParseError("row 1: no usable rows after applying the missing policy")
    return Dataset(name="wbc", points=matrix, labels=kept_labels, provenance=name_hint)


def load_wbc(path: str | Path, missing_policy: str = "drop") -> Dataset:
    path = Path(path)
    return load_wbc_csv(path.read_text(encoding="utf-8"), missing_policy, name_hint=str(path))


@dataclass(kw_only=True)
class CirclesSpec:
    """Two concentric rings at radii 1 and `factor`, with Gaussian noise."""

    n_samples: int = 400
    factor: float = 0.5
    noise_sigma: float = 0.1
    seed: int

    def __post_init__(self) -> None:
        if self.n_samples < 2:
            raise ValueError(f"need at least 2 samples, got {self.n_samples}")
        if not 0.0 < self.factor < 1.0:
            raise ValueError(f"factor must lie in (0, 1), got {self.factor}")
        if self.noise_sigma < 0:
            raise ValueError(f"noise must be >= 0, got {self.noise_sigma}")


def gen_circles(spec: CirclesSpec) -> Dataset:
    """Generate the concentric-circles dataset; ring ids land in labels.

    Outer ring (radius 1, label 0) first, inner ring (radius `factor`,
    label 1) second, angles evenly spaced, then i.i.d. N(0, noise_sigma^2)
    added per coordinate. Identical seeds give identical datasets.
    """
    n_out = spec.n_samples // 2
    n_in = spec.n_samples - n_out
    theta_out = np.linspace(0.0, 2.0 * np.pi, n_out, endpoint=False)
    theta_in = np.linspace(0.0, 2.0 * np.pi, n_in, endpoint=False)
    points = np.concatenate([
        np.column_stack([np.cos(theta_out), np.sin(theta_out)]),
        spec.factor * np.column_stack([np.cos(theta_in), np.sin(theta_in)]),
    ])
    labels = np.concatenate([np.zeros(n_out, dtype=np.int64), np.ones(n_in, dtype=np.int64)])
    if spec.noise_sigma > 0:
        rng = np.random.default_rng(spec.seed)
        points = points + rng.normal(scale=spec.noise_sigma, size=points.shape)
    provenance = (
        f"circles:n={spec.n_samples},factor={spec.factor:g},"
        f"noise={spec.noise_sigma:g},seed={spec.seed}"
    )
    return Dataset(name="circles", points=points, labels=labels, provenance=provenance)


def write_clustering(clustering: Clustering, dataset: Dataset, path: str | Path) -> None:
    """Write assignments as CSV plus a JSON sidecar of the run parameters.

    CSV columns: point_id, x0..x{k-1}, cluster, and true_label when the
    dataset is labeled. The sidecar lands next to the CSV with a .json
    suffix and holds params sufficient to re-run.
    """
    path = Path(path)
    assignments = clustering.assignments
    if set(assignments) != set(range(dataset.n_points)):
        raise ValueError("clustering does not cover the dataset")

    columns = ["point_id"] + [f"x{j}" for j in range(dataset.n_features)] + ["cluster"]
    if dataset.labels is not None:
        columns.append("true_label")
    lines = [",".join(columns)]
    for pid in range(dataset.n_points):
        cells = [str(pid)] + [repr(float(v)) for v in dataset.points[pid]]
        cells.append(str(assignments[pid]))
        if dataset.labels is not None:
            cells.append(str(dataset.labels[pid]))
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    sidecar = dict(clustering.params)
    sidecar["dataset"] = dataset.provenance
    path.with_suffix(".json").write_text(
        json.dumps(sidecar, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def read_clustering(path: str | Path) -> dict[int, int]:
    """Read back the point -> cluster map from a written CSV."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    header = lines[0].split(",")
    cluster_col = header.index("cluster")
    out: dict[int, int] = {}
    for line in lines[1:]:
        cells = line.split(",")
        out[int(cells[0])] = int(cells[cluster_col])
    return out
