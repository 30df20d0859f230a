"""Deterministic SVG drawing of a curve with its crossings and indices."""

import math
from xml.sax.saxutils import escape

from .curve import DEFAULT_CONFIG, find_crossings, whitney_number
from .invariant import crossing_indices

SIZE = 480
MARGIN = 40


def _fmt(v):
    return f"{v:.2f}"


def crossing_label(indices):
    (a1, a2), (b1, b2) = indices
    return f"({a1},{a2}|{b1},{b2})"


def render_svg(curve, cfg=DEFAULT_CONFIG, with_indices=True):
    """SVG text: the path, an orientation arrow at the base point, labelled crossing markers
    and the Whitney number in a legend."""
    xy = curve.xy
    lo = xy.min(axis=0)
    hi = xy.max(axis=0)
    span = max(float((hi - lo).max()), 1e-12)
    scale = (SIZE - 2 * MARGIN) / span

    def tr(p):
        # y axis flipped so the picture has the usual orientation
        return MARGIN + (p[0] - lo[0]) * scale, SIZE - MARGIN - (p[1] - lo[1]) * scale

    pts = [tr(p) for p in xy]
    d = "M " + " L ".join(f"{_fmt(x)} {_fmt(y)}" for x, y in pts) + " Z"
    w = whitney_number(curve, cfg)
    if with_indices:
        marks = [(c, crossing_label(idx)) for c, idx in crossing_indices(curve, cfg)]
    else:
        marks = [(c, "") for c in find_crossings(curve)]
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE + 30}" '
        f'viewBox="0 0 {SIZE} {SIZE + 30}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<path class="curve" d="{d}" fill="none" stroke="black" stroke-width="1.5"/>',
    ]
    # arrow along the first segment
    (x0, y0), (x1, y1) = pts[0], pts[1]
    ang = math.atan2(y1 - y0, x1 - x0)
    tip = (x0 + 14 * math.cos(ang), y0 + 14 * math.sin(ang))
    left = (tip[0] - 9 * math.cos(ang - 0.45), tip[1] - 9 * math.sin(ang - 0.45))
    right = (tip[0] - 9 * math.cos(ang + 0.45), tip[1] - 9 * math.sin(ang + 0.45))
    lines.append(
        f'<polygon class="arrow" points="{_fmt(tip[0])},{_fmt(tip[1])} {_fmt(left[0])},{_fmt(left[1])} '
        f'{_fmt(right[0])},{_fmt(right[1])}" fill="crimson"/>'
    )
    for c, label in marks:
        x, y = tr(c.location)
        lines.append(f'<circle class="crossing" cx="{_fmt(x)}" cy="{_fmt(y)}" r="4" fill="steelblue"/>')
        if label:
            lines.append(
                f'<text x="{_fmt(x + 6)}" y="{_fmt(y - 6)}" font-size="11" font-family="monospace">'
                f"{escape(label)}</text>"
            )
    lines.append(
        f'<text class="legend" x="{MARGIN}" y="{SIZE + 16}" font-size="13" font-family="monospace">'
        f"omega = {w}, crossings = {len(marks)}</text>"
    )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
