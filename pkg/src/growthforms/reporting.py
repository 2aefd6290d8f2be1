"""Machine-readable outputs: worldline CSV tracks, SVG plots and JSON reports."""

from __future__ import annotations

import csv
import json
from collections.abc import Sequence
from pathlib import Path
from typing import Any
from xml.sax.saxutils import escape

import numpy as np

from growthforms.constants import FLOAT_FORMAT
from growthforms.kinematics import Worldline
from growthforms.logger import get_logger

logger = get_logger(__name__)

SVG_WIDTH = 640
SVG_HEIGHT = 480
SVG_MARGIN = 48
SVG_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")


def ensure_dir(path: Path) -> Path:
    """Ensure a directory exists.

    Args:
        path: Directory path

    Returns:
        The directory path
    """
    path.mkdir(parents=True, exist_ok=True)
    return path


def format_float(value: float) -> str:
    return format(float(value), FLOAT_FORMAT)


def worldline_filename(scenario: str, index: int) -> str:
    return f"{scenario}_worldline_{index:03d}.csv"


def write_worldline_csv(path: Path, worldline: Worldline, labels: Sequence[str]) -> Path:
    """One row per step: ``param`` followed by the chart coordinates (time first)."""
    if len(labels) != worldline.points.shape[1]:
        raise ValueError(f"{len(labels)} labels for {worldline.points.shape[1]} coordinates")
    ensure_dir(path.parent)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["param", *labels])
        for p, x in zip(worldline.params, worldline.points):
            writer.writerow([format_float(p), *(format_float(c) for c in x)])
    logger.debug("worldline written", path=str(path), rows=len(worldline))
    return path


def _scale(values: np.ndarray, lo: float, hi: float, out_lo: float, out_hi: float) -> np.ndarray:
    span = hi - lo if hi > lo else 1.0
    return out_lo + (values - lo) / span * (out_hi - out_lo)


def render_worldlines_svg(
    worldlines: Sequence[Worldline],
    labels: tuple[str, str] = ("t", "x"),
    title: str = "",
    axes: tuple[int, int] = (0, 1),
) -> str:
    """SVG 1.1 document with one polyline per worldline in the plane of two chart axes."""
    w, h, m = SVG_WIDTH, SVG_HEIGHT, SVG_MARGIN
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f'<rect x="{m}" y="{m}" width="{w - 2 * m}" height="{h - 2 * m}" fill="none" stroke="#000000"/>',
    ]
    if title:
        parts.append(f'<text x="{w / 2}" y="{m / 2}" text-anchor="middle" font-size="14">{escape(title)}</text>')
    parts.append(f'<text x="{w / 2}" y="{h - m / 4}" text-anchor="middle" font-size="12">{escape(labels[0])}</text>')
    parts.append(
        f'<text x="{m / 4}" y="{h / 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 {m / 4} {h / 2})">{escape(labels[1])}</text>'
    )

    if worldlines:
        a, b = axes
        xs = np.concatenate([wl.points[:, a] for wl in worldlines])
        ys = np.concatenate([wl.points[:, b] for wl in worldlines])
        x_lo, x_hi, y_lo, y_hi = xs.min(), xs.max(), ys.min(), ys.max()
        for value, x, y, anchor in (
            (x_lo, m, h - m + 16, "start"),
            (x_hi, w - m, h - m + 16, "end"),
            (y_lo, m - 4, h - m, "end"),
            (y_hi, m - 4, m + 10, "end"),
        ):
            parts.append(f'<text x="{x}" y="{y}" text-anchor="{anchor}" font-size="10">{value:.4g}</text>')
        for i, wl in enumerate(worldlines):
            px = _scale(wl.points[:, a], x_lo, x_hi, m, w - m)
            py = _scale(wl.points[:, b], y_lo, y_hi, h - m, m)
            coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(px, py))
            color = SVG_COLORS[i % len(SVG_COLORS)]
            parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{coords}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_worldlines_svg(path: Path, worldlines: Sequence[Worldline], labels: tuple[str, str], title: str = "") -> Path:
    ensure_dir(path.parent)
    path.write_text(render_worldlines_svg(worldlines, labels, title), encoding="utf-8")
    return path


def dump_report(payload: dict[str, Any]) -> str:
    """Stable JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(payload, indent=2, sort_keys=True, allow_nan=True) + "\n"


def write_json_report(path: Path, payload: dict[str, Any]) -> Path:
    ensure_dir(path.parent)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(dump_report(payload))
    logger.debug("report written", path=str(path))
    return path
