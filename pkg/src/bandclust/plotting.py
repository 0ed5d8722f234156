"""Dependency-free SVG dot plots of (reordered) matrices."""
from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

from .errors import InputError
from .matrix import as_data_matrix

CELL = 10
MARGIN = 4


def _panel(A, x0: float, y0: float, title=None) -> list:
    values = np.abs(A.values)
    m, n = values.shape
    peak = values.max()
    w, h = n * CELL, m * CELL
    parts = []
    if title:
        parts.append(f'<text x="{x0:g}" y="{y0 - 6:g}" font-family="sans-serif" font-size="12">'
                     f"{escape(title)}</text>")
    # frame drawn as a path so every <rect> in the document is a data cell
    parts.append(f'<path d="M{x0:g} {y0:g}h{w}v{h}h-{w}z" fill="none" stroke="#888" stroke-width="1"/>')
    for i, j in zip(*np.nonzero(values)):
        opacity = values[i, j] / peak
        parts.append(f'<rect x="{x0 + j * CELL:g}" y="{y0 + i * CELL:g}" width="{CELL}" height="{CELL}" '
                     f'fill="#000" fill-opacity="{opacity:.4f}"/>')
    return parts


def render_dotplot(A, out_path=None, title=None) -> str:
    """One square per nonzero cell, opacity ``|a| / max|a|``; returns the SVG text."""
    return render_panels([A], out_path, [title] if title else None)


def render_panels(matrices, out_path=None, titles=None) -> str:
    """Side-by-side dot plots, e.g. original / scrambled / reordered."""
    matrices = [as_data_matrix(A) for A in matrices]
    if not matrices or any(A.rows == 0 or A.cols == 0 for A in matrices):
        raise InputError("cannot plot an empty matrix")
    top = MARGIN + (16 if titles else 0)
    gap = 3 * CELL
    width = MARGIN * 2 + sum(A.cols * CELL for A in matrices) + gap * (len(matrices) - 1)
    height = top + MARGIN + max(A.rows * CELL for A in matrices)
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
             f'viewBox="0 0 {width} {height}">']
    x = MARGIN
    for idx, A in enumerate(matrices):
        title = titles[idx] if titles else None
        parts.extend(_panel(A, x, top, title))
        x += A.cols * CELL + gap
    parts.append("</svg>")
    svg = "\n".join(parts) + "\n"
    if out_path is not None:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(svg)
    return svg
