"""Self-contained SVG line charts with mean +/- std bands.

Output is plain SVG 1.1 text (no scripts, fonts or external references) and
is a pure function of the inputs, so identical data gives identical bytes.

Layout
------
Fixed 800x400 viewport. Both axis ranges fit the finite data (bands
included) with 5% padding on each side; a flat range is widened to +/-0.5
around its value. Each series becomes one polyline for its mean and one
translucent polygon for ``mean - std .. mean + std``. Markers are red dashed
vertical lines.
"""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from freewill.errors import InvalidInput, ReportIOError

logger = logging.getLogger(__name__)

WIDTH, HEIGHT = 800, 400
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 70, 20, 40, 50
PAD_FRACTION = 0.05
N_TICKS = 6
PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#17becf")
MARKER_COLOR = "#d62728"


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _tick(v: float) -> str:
    s = f"{v:.4g}"
    return "0" if s == "-0" else s


def _padded(lo: float, hi: float) -> tuple[float, float]:
    if hi - lo <= 0:
        lo, hi = lo - 0.5, hi + 0.5
    pad = (hi - lo) * PAD_FRACTION
    return lo - pad, hi + pad


class _Canvas:
    def __init__(self, x_range: tuple[float, float], y_range: tuple[float, float]):
        self.x0, self.x1 = x_range
        self.y0, self.y1 = y_range
        self.left, self.right = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
        self.top, self.bottom = MARGIN_TOP, HEIGHT - MARGIN_BOTTOM
        self.parts: list[str] = []

    def px(self, x: float) -> float:
        return self.left + (x - self.x0) / (self.x1 - self.x0) * (self.right - self.left)

    def py(self, y: float) -> float:
        return self.bottom - (y - self.y0) / (self.y1 - self.y0) * (self.bottom - self.top)

    def add(self, element: str) -> None:
        self.parts.append(element)

    def points(self, xs: np.ndarray, ys: np.ndarray) -> str:
        return " ".join(f"{_fmt(self.px(x))},{_fmt(self.py(y))}" for x, y in zip(xs, ys))


def _runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """Contiguous ``[start, stop)`` spans where ``mask`` is true."""
    spans, start = [], None
    for i, ok in enumerate(mask):
        if ok and start is None:
            start = i
        elif not ok and start is not None:
            spans.append((start, i))
            start = None
    if start is not None:
        spans.append((start, len(mask)))
    return spans


def render_svg(series: Sequence[tuple[str, Sequence[float], Sequence[float]]],
               markers: Sequence[tuple[float, str]] = (),
               title: str = "", x_label: str = "step", y_label: str = "",
               x_start: float = 0.0) -> str:
    """Chart text for ``series`` sampled at ``x_start, x_start + 1, ...``."""
    if not series:
        raise InvalidInput("emit_svg needs at least one series")
    means = [np.asarray(m, dtype=float) for _, m, _ in series]
    stds = [np.asarray(s, dtype=float) for _, _, s in series]
    n = means[0].size
    if n == 0 or any(m.shape != (n,) or s.shape != (n,) for m, s in zip(means, stds)):
        raise InvalidInput("series means and stds must be non-empty and of equal length")
    xs = x_start + np.arange(n, dtype=float)

    bounds = np.concatenate([np.concatenate([m, m - s, m + s]) for m, s in zip(means, stds)])
    finite = bounds[np.isfinite(bounds)]
    if finite.size == 0:
        raise InvalidInput("series contain no finite values")
    canvas = _Canvas(_padded(float(xs[0]), float(xs[-1])), _padded(float(finite.min()), float(finite.max())))

    _axes(canvas, title, x_label, y_label)

    for i, (mean, std) in enumerate(zip(means, stds)):
        color = PALETTE[i % len(PALETTE)]
        for a, b in _runs(np.isfinite(mean) & np.isfinite(std)):
            upper = canvas.points(xs[a:b], (mean + std)[a:b])
            lower = canvas.points(xs[a:b][::-1], (mean - std)[a:b][::-1])
            canvas.add(f'<polygon points="{upper} {lower}" fill="{color}" fill-opacity="0.2" stroke="none"/>')
        for a, b in _runs(np.isfinite(mean)):
            canvas.add(f'<polyline points="{canvas.points(xs[a:b], mean[a:b])}" fill="none" '
                       f'stroke="{color}" stroke-width="1.5"/>')

    for step, label in markers:
        if not canvas.x0 <= step <= canvas.x1:
            continue
        x = _fmt(canvas.px(step))
        canvas.add(f'<line x1="{x}" y1="{canvas.top}" x2="{x}" y2="{canvas.bottom}" '
                   f'stroke="{MARKER_COLOR}" stroke-width="1.5" stroke-dasharray="6,4"/>')
        if label:
            canvas.add(f'<text x="{x}" y="{canvas.top - 4}" font-size="11" text-anchor="middle" '
                       f'fill="{MARKER_COLOR}">{escape(label)}</text>')

    _legend(canvas, [label for label, _, _ in series])

    head = (f'<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">\n'
            f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>\n')
    return head + "\n".join(canvas.parts) + "\n</svg>\n"


def _axes(canvas: _Canvas, title: str, x_label: str, y_label: str) -> None:
    c = canvas
    c.add(f'<rect x="{c.left}" y="{c.top}" width="{c.right - c.left}" height="{c.bottom - c.top}" '
          f'fill="none" stroke="#444444" stroke-width="1"/>')
    for v in np.linspace(c.x0, c.x1, N_TICKS):
        x = _fmt(c.px(v))
        c.add(f'<line x1="{x}" y1="{c.bottom}" x2="{x}" y2="{c.bottom + 5}" stroke="#444444"/>')
        c.add(f'<text x="{x}" y="{c.bottom + 18}" font-size="11" text-anchor="middle">{_tick(v)}</text>')
    for v in np.linspace(c.y0, c.y1, N_TICKS):
        y = _fmt(c.py(v))
        c.add(f'<line x1="{c.left - 5}" y1="{y}" x2="{c.left}" y2="{y}" stroke="#444444"/>')
        c.add(f'<text x="{c.left - 8}" y="{y}" font-size="11" text-anchor="end" '
              f'dominant-baseline="middle">{_tick(v)}</text>')
    if title:
        c.add(f'<text x="{WIDTH / 2:.1f}" y="20" font-size="15" text-anchor="middle">{escape(title)}</text>')
    if x_label:
        c.add(f'<text x="{(c.left + c.right) / 2:.1f}" y="{HEIGHT - 10}" font-size="12" '
              f'text-anchor="middle">{escape(x_label)}</text>')
    if y_label:
        cy = (c.top + c.bottom) / 2
        c.add(f'<text x="16" y="{cy:.1f}" font-size="12" text-anchor="middle" '
              f'transform={quoteattr(f"rotate(-90 16 {cy:.1f})")}>{escape(y_label)}</text>')


def _legend(canvas: _Canvas, labels: list[str]) -> None:
    x = canvas.right - 150
    for i, label in enumerate(labels):
        y = canvas.top + 14 + 16 * i
        color = PALETTE[i % len(PALETTE)]
        canvas.add(f'<line x1="{x}" y1="{y}" x2="{x + 20}" y2="{y}" stroke="{color}" stroke-width="2"/>')
        canvas.add(f'<text x="{x + 26}" y="{y + 4}" font-size="11">{escape(label)}</text>')


def emit_svg(series: Sequence[tuple[str, Sequence[float], Sequence[float]]],
             markers: Sequence[tuple[float, str]], path: str | Path, title: str = "",
             x_label: str = "step", y_label: str = "", x_start: float = 0.0) -> Path:
    """Write one chart to ``path``; see :func:`render_svg`."""
    text = render_svg(series, markers, title=title, x_label=x_label, y_label=y_label, x_start=x_start)
    p = Path(path)
    try:
        p.parent.mkdir(parents=True, exist_ok=True)
        with open(p, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise ReportIOError(p, exc.strerror or str(exc)) from None
    logger.info("wrote %s", p)
    return p
