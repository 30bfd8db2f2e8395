"""Minimal deterministic SVG emission for decompositions and spectra.

Plots are plain SVG 1.1 text (polylines and rects), so output files are
self-contained, diffable and need no rendering backend.
"""

from __future__ import annotations

import numpy as np

from .core import Decomposition, Signal
from .specfreq import TimeFrequencyGrid

_WIDTH = 900
_PANEL_HEIGHT = 110
_PANEL_GAP = 14
_LEFT = 70
_RIGHT = 20
_TOP = 20
_MAX_LINE_POINTS = 1024
_MAX_HEAT_COLS = 256


def _fmt(v: float) -> str:
    return format(float(v), ".6g")


def _downsample_line(t: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Bucketed min/max downsampling; preserves the drawn envelope."""
    n = y.size
    if n <= _MAX_LINE_POINTS:
        return t, y
    nbuckets = _MAX_LINE_POINTS // 2
    edges = np.linspace(0, n, nbuckets + 1).astype(int)
    ti, yi = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        if b <= a:
            continue
        seg = y[a:b]
        lo = a + int(np.argmin(seg))
        hi = a + int(np.argmax(seg))
        for i in sorted((lo, hi)):
            ti.append(t[i])
            yi.append(y[i])
    return np.asarray(ti), np.asarray(yi)


def _panel_polyline(
    t: np.ndarray, y: np.ndarray, top: float, label: str
) -> list[str]:
    w = _WIDTH - _LEFT - _RIGHT
    h = _PANEL_HEIGHT
    t0, t1 = float(t[0]), float(t[-1])
    tspan = (t1 - t0) or 1.0
    ymin, ymax = float(y.min()), float(y.max())
    yspan = (ymax - ymin) or 1.0
    td, yd = _downsample_line(t, y)
    xs = _LEFT + (td - t0) / tspan * w
    ys = top + h - (yd - ymin) / yspan * h
    points = " ".join(f"{_fmt(x)},{_fmt(v)}" for x, v in zip(xs, ys))
    return [
        f'<rect x="{_LEFT}" y="{_fmt(top)}" width="{w}" height="{h}" '
        'fill="none" stroke="#cccccc"/>',
        f'<polyline points="{points}" fill="none" stroke="#1f4e9c" '
        'stroke-width="1"/>',
        f'<text x="4" y="{_fmt(top + h / 2)}" font-size="12" '
        f'font-family="monospace">{label}</text>',
        f'<text x="{_LEFT}" y="{_fmt(top + h + 11)}" font-size="9" '
        f'font-family="monospace">[{_fmt(ymin)}, {_fmt(ymax)}]</text>',
    ]


def render_decomposition_svg(source: Signal, d: Decomposition) -> str:
    """Stacked line panels: input, each IMF, residual (per-panel autoscale)."""
    panels = [("input", source)]
    panels += [(f"imf{i + 1}", imf) for i, imf in enumerate(d.imfs)]
    panels.append(("residual", d.residual))
    total_h = _TOP + len(panels) * (_PANEL_HEIGHT + _PANEL_GAP) + 20
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_WIDTH}" height="{total_h}" '
        f'viewBox="0 0 {_WIDTH} {total_h}">',
        f'<rect width="{_WIDTH}" height="{total_h}" fill="#ffffff"/>',
    ]
    top = float(_TOP)
    for label, sig in panels:
        parts.extend(_panel_polyline(sig.times, sig.samples, top, label))
        top += _PANEL_HEIGHT + _PANEL_GAP
    t = source.times
    parts.append(
        f'<text x="{_LEFT}" y="{_fmt(top + 4)}" font-size="11" '
        f'font-family="monospace">t = [{_fmt(t[0])}, {_fmt(t[-1])}]</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# White -> amber -> dark red, linear in normalized amplitude.
_STOPS = np.array([[255, 255, 255], [245, 166, 35], [122, 11, 11]], dtype=float)


def _color(v: float) -> str:
    v = min(max(v, 0.0), 1.0)
    pos = v * (len(_STOPS) - 1)
    i = min(int(pos), len(_STOPS) - 2)
    frac = pos - i
    rgb = (1 - frac) * _STOPS[i] + frac * _STOPS[i + 1]
    return "#%02x%02x%02x" % tuple(int(round(c)) for c in rgb)


def _pool_columns(a: np.ndarray, max_cols: int) -> np.ndarray:
    """Max-pool rows of a (time, bins) matrix down to at most max_cols rows."""
    n = a.shape[0]
    if n <= max_cols:
        return a
    edges = np.linspace(0, n, max_cols + 1).astype(int)
    return np.stack([a[s:e].max(axis=0) for s, e in zip(edges[:-1], edges[1:])])


def render_spectrum_svg(grid: TimeFrequencyGrid) -> str:
    """Amplitude heat map: time on the horizontal axis, frequency vertical."""
    pooled = _pool_columns(grid.amplitude, _MAX_HEAT_COLS)
    ncols, nbins = pooled.shape
    w = _WIDTH - _LEFT - _RIGHT
    h = 420
    peak = float(pooled.max()) or 1.0
    cell_w = w / ncols
    cell_h = h / nbins
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_WIDTH}" height="{h + 70}" viewBox="0 0 {_WIDTH} {h + 70}">',
        f'<rect width="{_WIDTH}" height="{h + 70}" fill="#ffffff"/>',
    ]
    for i in range(ncols):
        x = _LEFT + i * cell_w
        for j in range(nbins):
            v = pooled[i, j] / peak
            if v <= 0:
                continue  # background already white
            y = _TOP + h - (j + 1) * cell_h
            parts.append(
                f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(cell_w + 0.5)}" '
                f'height="{_fmt(cell_h + 0.5)}" fill="{_color(v)}"/>'
            )
    t0, t1 = float(grid.times[0]), float(grid.times[-1])
    f0, f1 = float(grid.freqs[0]), float(grid.freqs[-1])
    parts.extend(
        [
            f'<rect x="{_LEFT}" y="{_TOP}" width="{w}" height="{h}" '
            'fill="none" stroke="#444444"/>',
            f'<text x="{_LEFT}" y="{_TOP + h + 16}" font-size="11" '
            f'font-family="monospace">t = [{_fmt(t0)}, {_fmt(t1)}]</text>',
            f'<text x="4" y="{_TOP + 12}" font-size="11" '
            f'font-family="monospace">f = {_fmt(f1)}</text>',
            f'<text x="4" y="{_TOP + h}" font-size="11" '
            f'font-family="monospace">f = {_fmt(f0)}</text>',
            f'<text x="{_LEFT}" y="{_TOP + h + 34}" font-size="10" '
            f'font-family="monospace">amplitude 0..{_fmt(peak)}</text>',
        ]
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
