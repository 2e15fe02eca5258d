"""Standalone SVG scatter plots of 2-D clusterings.

Output is byte-deterministic: fixed palette, fixed float formatting, no
timestamps. Clusters are colored in sorted-label order from an 8-color
palette (cycling past 8).
"""
from __future__ import annotations

from pathlib import Path

from .dataio import Dataset
from .qhca import Clustering

PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
)

_WIDTH = 640
_HEIGHT = 480
_MARGIN = 40
_RADIUS = 3.0


def _fmt(value: float) -> str:
    return f"{value:.3f}"


def emit_svg_scatter(dataset: Dataset, clustering: Clustering, path: str | Path) -> None:
    """Render one circle per point, colored by cluster, with min/max ticks."""
    if dataset.n_features != 2:
        raise ValueError(
            f"scatter plots need 2-D data, got {dataset.n_features}-D; reduce with PCA first"
        )
    assignments = clustering.assignments
    if set(assignments) != set(range(dataset.n_points)):
        raise ValueError("clustering does not cover the dataset")

    xs = dataset.points[:, 0]
    ys = dataset.points[:, 1]
    x_min, x_max = float(xs.min()), float(xs.max())
    y_min, y_max = float(ys.min()), float(ys.max())
    x_span = x_max - x_min or 1.0
    y_span = y_max - y_min or 1.0

    def to_px(x: float, y: float) -> tuple[float, float]:
        px = _MARGIN + (x - x_min) / x_span * (_WIDTH - 2 * _MARGIN)
        py = _HEIGHT - _MARGIN - (y - y_min) / y_span * (_HEIGHT - 2 * _MARGIN)
        return px, py

    labels = sorted({label for _, label in assignments.items()})
    color_of = {label: PALETTE[i % len(PALETTE)] for i, label in enumerate(labels)}

    left, bottom = _MARGIN, _HEIGHT - _MARGIN
    right, top = _WIDTH - _MARGIN, _MARGIN
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="black"/>',
        f'<line x1="{left}" y1="{bottom}" x2="{left}" y2="{top}" stroke="black"/>',
        f'<text x="{left}" y="{bottom + 16}" font-size="10">{_fmt(x_min)}</text>',
        f'<text x="{right - 30}" y="{bottom + 16}" font-size="10">{_fmt(x_max)}</text>',
        f'<text x="{left - 36}" y="{bottom}" font-size="10">{_fmt(y_min)}</text>',
        f'<text x="{left - 36}" y="{top + 8}" font-size="10">{_fmt(y_max)}</text>',
    ]
    for pid in range(dataset.n_points):
        px, py = to_px(float(xs[pid]), float(ys[pid]))
        color = color_of[assignments[pid]]
        parts.append(
            f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="{_RADIUS}" fill="{color}"/>'
        )
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n", encoding="utf-8")
