"""Minimal static SVG renderings of histograms, ROC curves, and sweep curves.

Hand-rolled on purpose: artifacts must be byte-identical across reruns, so
there are no timestamps, generator strings, or content-hashed ids here.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

WIDTH = 720
HEIGHT = 480
MARGIN_LEFT = 72
MARGIN_RIGHT = 24
MARGIN_TOP = 44
MARGIN_BOTTOM = 58

PALETTE = [
    "#0173b2",
    "#de8f05",
    "#029e73",
    "#d55e00",
    "#cc78bc",
    "#ca9161",
    "#949494",
    "#56b4e9",
]


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _label(x: float) -> str:
    return f"{x:.6g}"


class _Canvas:
    def __init__(self, x_range, y_range, title, xlabel, ylabel):
        x_lo, x_hi = x_range
        y_lo, y_hi = y_range
        if x_hi <= x_lo:
            x_hi = x_lo + 1.0
        if y_hi <= y_lo:
            y_hi = y_lo + 1.0
        self.x_lo, self.x_hi = x_lo, x_hi
        self.y_lo, self.y_hi = y_lo, y_hi
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
            f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
            f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
            f'<text x="{WIDTH / 2:.0f}" y="24" font-family="sans-serif" '
            f'font-size="15" text-anchor="middle">{title}</text>',
        ]
        self._axes(xlabel, ylabel)

    def px(self, x: float) -> float:
        span = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
        return MARGIN_LEFT + (x - self.x_lo) / (self.x_hi - self.x_lo) * span

    def py(self, y: float) -> float:
        span = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
        return HEIGHT - MARGIN_BOTTOM - (y - self.y_lo) / (self.y_hi - self.y_lo) * span

    def _axes(self, xlabel, ylabel):
        x0, x1 = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
        y0, y1 = HEIGHT - MARGIN_BOTTOM, MARGIN_TOP
        self.parts.append(
            f'<rect x="{x0}" y="{y1}" width="{x1 - x0}" height="{y0 - y1}" '
            'fill="none" stroke="black" stroke-width="1"/>'
        )
        for tick in np.linspace(self.x_lo, self.x_hi, 6):
            px = self.px(tick)
            self.parts.append(
                f'<line x1="{_fmt(px)}" y1="{y0}" x2="{_fmt(px)}" y2="{y0 + 5}" '
                'stroke="black" stroke-width="1"/>'
            )
            self.parts.append(
                f'<text x="{_fmt(px)}" y="{y0 + 19}" font-family="sans-serif" '
                f'font-size="11" text-anchor="middle">{_label(tick)}</text>'
            )
        for tick in np.linspace(self.y_lo, self.y_hi, 6):
            py = self.py(tick)
            self.parts.append(
                f'<line x1="{x0 - 5}" y1="{_fmt(py)}" x2="{x0}" y2="{_fmt(py)}" '
                'stroke="black" stroke-width="1"/>'
            )
            self.parts.append(
                f'<text x="{x0 - 8}" y="{_fmt(py + 4)}" font-family="sans-serif" '
                f'font-size="11" text-anchor="end">{_label(tick)}</text>'
            )
        self.parts.append(
            f'<text x="{(x0 + x1) / 2:.0f}" y="{HEIGHT - 14}" font-family="sans-serif" '
            f'font-size="13" text-anchor="middle">{xlabel}</text>'
        )
        self.parts.append(
            f'<text x="20" y="{(y0 + y1) / 2:.0f}" font-family="sans-serif" '
            f'font-size="13" text-anchor="middle" '
            f'transform="rotate(-90 20 {(y0 + y1) / 2:.0f})">{ylabel}</text>'
        )

    def polyline(self, xs, ys, color, width=1.5, dashed=False):
        coords = " ".join(
            f"{_fmt(self.px(x))},{_fmt(self.py(y))}" for x, y in zip(xs, ys)
        )
        dash = ' stroke-dasharray="6,4"' if dashed else ""
        self.parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" '
            f'stroke-width="{width}"{dash}/>'
        )

    def markers(self, xs, ys, color, radius=3.0):
        for x, y in zip(xs, ys):
            self.parts.append(
                f'<circle cx="{_fmt(self.px(x))}" cy="{_fmt(self.py(y))}" '
                f'r="{radius}" fill="{color}"/>'
            )

    def hline(self, y, color="#555555"):
        self.parts.append(
            f'<line x1="{MARGIN_LEFT}" y1="{_fmt(self.py(y))}" '
            f'x2="{WIDTH - MARGIN_RIGHT}" y2="{_fmt(self.py(y))}" '
            f'stroke="{color}" stroke-width="1" stroke-dasharray="4,4"/>'
        )

    def legend(self, labels_colors):
        y = MARGIN_TOP + 16
        for label, color in labels_colors:
            self.parts.append(
                f'<line x1="{WIDTH - 210}" y1="{y - 4}" x2="{WIDTH - 186}" '
                f'y2="{y - 4}" stroke="{color}" stroke-width="3"/>'
            )
            self.parts.append(
                f'<text x="{WIDTH - 180}" y="{y}" font-family="sans-serif" '
                f'font-size="12">{label}</text>'
            )
            y += 18

    def write(self, path):
        self.parts.append("</svg>")
        Path(path).write_text("\n".join(self.parts) + "\n")


def histogram_svg(series, path, title, xlabel="switching current", x_range=None):
    """Overlaid step histograms; series is a list of (label, edges, counts)."""
    if x_range is None:
        lo = min(float(edges[0]) for _, edges, _ in series)
        hi = max(float(edges[-1]) for _, edges, _ in series)
    else:
        lo, hi = x_range
    top = max(1, max(int(np.max(counts)) for _, _, counts in series))
    canvas = _Canvas((lo, hi), (0, top * 1.05), title, xlabel, "counts")
    labels = []
    for k, (label, edges, counts) in enumerate(series):
        color = PALETTE[k % len(PALETTE)]
        xs = np.repeat(edges, 2)[1:-1]
        ys = np.repeat(counts, 2)
        canvas.polyline(xs, ys, color)
        labels.append((label, color))
    canvas.legend(labels)
    canvas.write(path)


def roc_svg(series, path, title):
    """ROC curves with the chance diagonal; series is a list of (label, points)."""
    canvas = _Canvas((0, 1), (0, 1), title, "false positive rate", "true positive rate")
    canvas.polyline([0, 1], [0, 1], "#999999", width=1.0, dashed=True)
    labels = []
    for k, (label, points) in enumerate(series):
        color = PALETTE[k % len(PALETTE)]
        pts = np.asarray(points, dtype=float)
        canvas.polyline(pts[:, 0], pts[:, 1], color)
        labels.append((label, color))
    canvas.legend(labels)
    canvas.write(path)


def curve_svg(series, path, title, xlabel, ylabel, threshold=None, y_range=None):
    """Marker-and-line curves; series is a list of (label, xs, ys)."""
    all_x = np.concatenate([np.asarray(xs, dtype=float) for _, xs, _ in series])
    all_y = np.concatenate([np.asarray(ys, dtype=float) for _, _, ys in series])
    if y_range is None:
        pad = 0.05 * max(all_y.max() - all_y.min(), 1e-9)
        y_range = (all_y.min() - pad, all_y.max() + pad)
        if threshold is not None:
            y_range = (min(y_range[0], threshold - pad), max(y_range[1], threshold + pad))
    canvas = _Canvas((all_x.min(), all_x.max()), y_range, title, xlabel, ylabel)
    if threshold is not None:
        canvas.hline(threshold)
    labels = []
    for k, (label, xs, ys) in enumerate(series):
        color = PALETTE[k % len(PALETTE)]
        canvas.polyline(xs, ys, color)
        canvas.markers(xs, ys, color)
        labels.append((label, color))
    canvas.legend(labels)
    canvas.write(path)
