"""Minimal static SVG plotting (no plotting dependency).

Output is byte-deterministic for identical inputs: fixed float formatting,
fixed element order.
"""

from __future__ import annotations

import numpy as np

_W, _H, _PAD = 640, 640, 40


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def path_plot(branches: list[tuple[str, np.ndarray, np.ndarray]]) -> str:
    """One polyline per (label, x, y) branch plus a target marker at the
    origin.  Coordinates in km; aspect ratio preserved."""
    xs = np.concatenate([b[1] for b in branches] + [np.zeros(1)])
    ys = np.concatenate([b[2] for b in branches] + [np.zeros(1)])
    xmin, xmax = float(xs.min()), float(xs.max())
    ymin, ymax = float(ys.min()), float(ys.max())
    span = max(xmax - xmin, ymax - ymin, 1e-9)
    cx, cy = 0.5 * (xmin + xmax), 0.5 * (ymin + ymax)
    scale = (_W - 2 * _PAD) / span

    def px(x: float) -> float:
        return _W / 2 + (x - cx) * scale

    def py(y: float) -> float:
        return _H / 2 - (y - cy) * scale

    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b",
              "#e377c2", "#7f7f7f", "#bcbd22"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
    ]
    for i, (label, bx, by) in enumerate(branches):
        pts = " ".join(f"{_fmt(px(float(x)))},{_fmt(py(float(y)))}"
                       for x, y in zip(bx, by))
        color = colors[i % len(colors)]
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            f'stroke-width="1.5"><title>{label}</title></polyline>'
        )
    parts.append(
        f'<circle cx="{_fmt(px(0.0))}" cy="{_fmt(py(0.0))}" r="5" '
        f'fill="black"><title>target</title></circle>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def series_plot(t: np.ndarray, series: list[tuple[str, np.ndarray]],
                ylabel: str) -> str:
    """Simple time-series plot, one polyline per labelled series."""
    ys = np.concatenate([s[1] for s in series])
    ymin, ymax = float(ys.min()), float(ys.max())
    if ymax - ymin < 1e-15:
        ymax = ymin + 1.0
    t0, t1 = float(t[0]), float(t[-1])

    def px(x: float) -> float:
        return _PAD + (x - t0) / (t1 - t0) * (_W - 2 * _PAD)

    def py(y: float) -> float:
        return _H - _PAD - (y - ymin) / (ymax - ymin) * (_H - 2 * _PAD)

    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_PAD}" y="20" font-size="14">{ylabel}</text>',
    ]
    for i, (label, y) in enumerate(series):
        pts = " ".join(f"{_fmt(px(float(a)))},{_fmt(py(float(b)))}"
                       for a, b in zip(t, y))
        parts.append(
            f'<polyline points="{pts}" fill="none" '
            f'stroke="{colors[i % len(colors)]}" stroke-width="1.5">'
            f"<title>{label}</title></polyline>"
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
