"""SVG rendering of 2D cakes with optional cut or depth-heatmap overlays."""

from __future__ import annotations

import numpy as np

from .cake import Cake
from .depth import Cut, depth_grid
from .errors import UnsupportedDimension
from .geometry import _clip_polygon

MAX_HEATMAP_RESOLUTION = 512

PIECE_FILL = "#7a9ec2"
PIECE_EDGE = "#2b4a6f"
SHADE_FILL = "#e0b13e"
LINE_COLOR = "#8c1a1a"

# dark blue -> teal -> yellow ramp
_RAMP = [(0.10, 0.12, 0.35), (0.05, 0.55, 0.55), (0.95, 0.90, 0.25)]


def _fmt(v: float) -> str:
    return f"{v:.10g}"


def _color(t: float) -> str:
    t = min(1.0, max(0.0, t))
    if t < 0.5:
        a, b, u = _RAMP[0], _RAMP[1], t * 2.0
    else:
        a, b, u = _RAMP[1], _RAMP[2], t * 2.0 - 1.0
    rgb = [int(round(255 * ((1 - u) * x + u * y))) for x, y in zip(a, b)]
    return f"#{rgb[0]:02x}{rgb[1]:02x}{rgb[2]:02x}"


def _line_through_box(anchor, direction, lo, hi):
    """Endpoints of the line through anchor perpendicular to direction,
    clipped to the box (Liang-Barsky in the line parameter)."""
    perp = np.array([-direction[1], direction[0]])
    tmin, tmax = -np.inf, np.inf
    for axis in range(2):
        d = perp[axis]
        if abs(d) < 1e-15:
            continue
        t1 = (lo[axis] - anchor[axis]) / d
        t2 = (hi[axis] - anchor[axis]) / d
        tmin = max(tmin, min(t1, t2))
        tmax = min(tmax, max(t1, t2))
    if not np.isfinite(tmin) or tmin > tmax:
        return None
    return anchor + tmin * perp, anchor + tmax * perp


def render_svg(cake: Cake, cut: Cut | None = None, heatmap: int | None = None) -> str:
    """Render the cake as standalone SVG 1.1 text.

    Exactly one overlay may be given: a Cut (boundary line plus shaded
    halfplane with inner normal = the cut direction) or a heatmap grid
    resolution. The viewBox is the 10%-inflated bounding box; a y-flip
    transform keeps cake coordinates readable from the document.
    """
    if cake.dim != 2:
        raise UnsupportedDimension(f"render_svg is 2D only, cake has dim {cake.dim}")
    if cut is not None and heatmap is not None:
        raise ValueError("choose at most one overlay")
    if heatmap is not None and not 1 <= heatmap <= MAX_HEATMAP_RESOLUTION:
        raise ValueError(f"heatmap resolution must be 1..{MAX_HEATMAP_RESOLUTION}")

    lo, hi = cake.inflated_bbox(0.1)
    width, height = hi - lo
    diag = float(np.hypot(width, height))
    stroke = 0.004 * diag
    bound = 1.0 / (cake.dim + 1)
    legend_w = 0.18 * width if heatmap is not None else 0.0

    parts: list[str] = []
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{_fmt(lo[0])} {_fmt(lo[1])} {_fmt(width + legend_w)} {_fmt(height)}" '
        f'width="640" height="{_fmt(640 * height / (width + legend_w))}">'
    )
    parts.append(f'<g transform="matrix(1 0 0 -1 0 {_fmt(lo[1] + hi[1])})">')

    vmax = bound  # overwritten by the heatmap's true maximum below
    if heatmap is not None:
        values, xs, ys = depth_grid(cake, heatmap)
        vmax = max(float(values.max()), 1e-12)
        cw = width / heatmap
        ch = height / heatmap
        for i in range(heatmap):
            for j in range(heatmap):
                v = float(values[i, j])
                parts.append(
                    f'<rect class="cell" x="{_fmt(xs[i] - cw / 2)}" '
                    f'y="{_fmt(ys[j] - ch / 2)}" width="{_fmt(cw)}" height="{_fmt(ch)}" '
                    f'fill="{_color(v / vmax)}" data-depth="{v!r}"/>'
                )

    piece_fill = "none" if heatmap is not None else PIECE_FILL
    for p in cake.pieces:
        pts = " ".join(f"{_fmt(v[0])},{_fmt(v[1])}" for v in p.vertices)
        parts.append(
            f'<polygon class="piece" points="{pts}" fill="{piece_fill}" '
            f'fill-opacity="0.85" stroke="{PIECE_EDGE}" stroke-width="{_fmt(stroke)}"/>'
        )

    if cut is not None:
        a = np.asarray(cut.direction, dtype=float)
        offset = float(a @ cut.anchor)
        box = np.array(
            [[lo[0], lo[1]], [hi[0], lo[1]], [hi[0], hi[1]], [lo[0], hi[1]]]
        )
        shade = _clip_polygon(box, -a, -offset)  # keeps <y, a> >= offset
        if shade.shape[0] >= 3:
            pts = " ".join(f"{_fmt(v[0])},{_fmt(v[1])}" for v in shade)
            parts.append(
                f'<polygon class="cut-shade" points="{pts}" fill="{SHADE_FILL}" '
                f'fill-opacity="0.35" stroke="none"/>'
            )
        seg = _line_through_box(np.asarray(cut.anchor, float), a, lo, hi)
        if seg is not None:
            p0, p1 = seg
            parts.append(
                f'<line class="cut-line" x1="{_fmt(p0[0])}" y1="{_fmt(p0[1])}" '
                f'x2="{_fmt(p1[0])}" y2="{_fmt(p1[1])}" stroke="{LINE_COLOR}" '
                f'stroke-width="{_fmt(1.5 * stroke)}"/>'
            )
        parts.append(
            f'<circle class="cut-anchor" cx="{_fmt(cut.anchor[0])}" '
            f'cy="{_fmt(cut.anchor[1])}" r="{_fmt(2 * stroke)}" fill="{LINE_COLOR}"/>'
        )

    parts.append("</g>")

    if heatmap is not None:
        # legend strip with the 1/(n+1) isoline pinned and labeled
        lx = hi[0] + 0.04 * width
        lw = 0.06 * width
        steps = 24
        for k in range(steps):
            v0 = vmax * k / steps
            parts.append(
                f'<rect class="legend-step" x="{_fmt(lx)}" '
                f'y="{_fmt(hi[1] - height * (k + 1) / steps)}" width="{_fmt(lw)}" '
                f'height="{_fmt(height / steps)}" fill="{_color((v0 + vmax / (2 * steps)) / vmax)}"/>'
            )
        frac = min(1.0, bound / vmax)
        iso_y = hi[1] - height * frac
        parts.append(
            f'<line class="legend-isoline" x1="{_fmt(lx - 0.01 * width)}" '
            f'y1="{_fmt(iso_y)}" x2="{_fmt(lx + lw + 0.01 * width)}" y2="{_fmt(iso_y)}" '
            f'stroke="#000" stroke-width="{_fmt(stroke)}"/>'
        )
        parts.append(
            f'<text class="legend-label" x="{_fmt(lx + lw + 0.02 * width)}" '
            f'y="{_fmt(iso_y)}" font-size="{_fmt(0.035 * height)}" '
            f'dominant-baseline="middle">1/(n+1) = {bound!r}</text>'
        )

    parts.append("</svg>")
    return "\n".join(parts)
