"""Minimal static SVG line plots (no plotting library needed)."""
from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b")

WIDTH, HEIGHT = 640, 420
LEFT, RIGHT, TOP, BOTTOM = 70, 20, 30, 50


def _ticks(lo, hi, n=5):
    return np.linspace(lo, hi, n)


def line_plot(x, series, xlabel="", ylabel="", title=""):
    """Return SVG markup for one or more ``label -> y`` series over ``x``.

    ``x`` may be a single array shared by all series or a dict keyed like
    ``series``.
    """
    xs = x if isinstance(x, dict) else {k: x for k in series}
    allx = np.concatenate([np.asarray(xs[k], float) for k in series])
    ally = np.concatenate([np.asarray(v, float) for v in series.values()])
    x0, x1 = float(np.nanmin(allx)), float(np.nanmax(allx))
    y0, y1 = float(np.nanmin(ally)), float(np.nanmax(ally))
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM

    def px(v):
        return LEFT + (v - x0) / (x1 - x0) * pw

    def py(v):
        return TOP + (1.0 - (v - y0) / (y1 - y0)) * ph

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'font-family="sans-serif" font-size="12">',
        f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for v in _ticks(x0, x1):
        parts.append(f'<text x="{px(v):.1f}" y="{TOP + ph + 16}" text-anchor="middle">{v:.4g}</text>')
    for v in _ticks(y0, y1):
        parts.append(f'<text x="{LEFT - 6}" y="{py(v) + 4:.1f}" text-anchor="end">{v:.4g}</text>')
    parts.append(f'<text x="{LEFT + pw / 2}" y="{HEIGHT - 10}" text-anchor="middle">{escape(xlabel)}</text>')
    parts.append(f'<text x="16" y="{TOP + ph / 2}" text-anchor="middle" '
                 f'transform="rotate(-90 16 {TOP + ph / 2})">{escape(ylabel)}</text>')
    if title:
        parts.append(f'<text x="{LEFT + pw / 2}" y="18" text-anchor="middle">{escape(title)}</text>')
    for i, (label, y) in enumerate(series.items()):
        color = COLORS[i % len(COLORS)]
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}"
                       for a, b in zip(np.asarray(xs[label], float), np.asarray(y, float)))
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{pts}"/>')
        parts.append(f'<text x="{LEFT + pw - 8}" y="{TOP + 16 + 15 * i}" text-anchor="end" '
                     f'fill="{color}">{escape(str(label))}</text>')
    parts.append("</svg>\n")
    return "\n".join(parts)


def write_line_plot(path, x, series, **labels):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(line_plot(x, series, **labels))
    return path
