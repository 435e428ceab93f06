"""Deterministic SVG rendering of meshes, level coloring, and CVR overlays.

Output is byte-identical across runs: coordinates are mapped with exact
rational arithmetic and only formatted to fixed-precision decimals at the
last moment.
"""

from __future__ import annotations

from .rational import rat
from .mesh import TMesh
from .hierarchy import HMesh, annotate_levels
from .cvr import cvr_graph

_LEVEL_COLORS = ("#202020", "#c03020", "#2060c0", "#20a040", "#b08020", "#8040a0")

_SIZE = 480
_PAD = 20


def _fmt(q) -> str:
    q = rat(q)
    return f"{q.numerator / q.denominator:.3f}".rstrip("0").rstrip(".")


class _Viewport:
    def __init__(self, domain):
        xl, xr, yb, yt = domain
        span = max(xr - xl, yt - yb)
        self.scale = rat(_SIZE - 2 * _PAD) / span
        self.xl, self.yt = xl, yt
        self.w = _PAD * 2 + self.scale * (xr - xl)
        self.h = _PAD * 2 + self.scale * (yt - yb)

    def x(self, v):
        return _fmt(_PAD + self.scale * (v - self.xl))

    def y(self, v):
        # SVG y axis points down
        return _fmt(_PAD + self.scale * (self.yt - v))


def _line(vp, x0, y0, x1, y1, color, width):
    return (f'<line x1="{vp.x(x0)}" y1="{vp.y(y0)}" x2="{vp.x(x1)}" y2="{vp.y(y1)}" '
            f'stroke="{color}" stroke-width="{width}" stroke-linecap="square"/>')


def render_svg(obj, show_levels=False, show_cvr=False) -> str:
    """SVG drawing of a mesh; optional level coloring and CVR overlay."""
    mesh = obj.realized if isinstance(obj, HMesh) else obj
    vp = _Viewport(mesh.domain)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(vp.w)}" '
        f'height="{_fmt(vp.h)}" viewBox="0 0 {_fmt(vp.w)} {_fmt(vp.h)}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    base_color = "#9a9a9a" if show_cvr else "#202020"
    levels = None
    if show_levels:
        levels = annotate_levels(obj if isinstance(obj, HMesh) else mesh)
    for y, x0, x1 in mesh.hsegments:
        color = base_color
        if levels is not None:
            color = _LEVEL_COLORS[min(levels.segment_level[("h", y, x0, x1)],
                                      len(_LEVEL_COLORS) - 1)]
        parts.append(_line(vp, x0, y, x1, y, color, 1))
    for x, y0, y1 in mesh.vsegments:
        color = base_color
        if levels is not None:
            color = _LEVEL_COLORS[min(levels.segment_level[("v", x, y0, y1)],
                                      len(_LEVEL_COLORS) - 1)]
        parts.append(_line(vp, x, y0, x, y1, color, 1))
    if show_cvr:
        graph = cvr_graph(obj)
        for (u, v) in graph.edges:
            parts.append(_line(vp, u[0], u[1], v[0], v[1], "#000000", 2))
        for (x, y) in graph.nodes:
            parts.append(f'<circle cx="{vp.x(x)}" cy="{vp.y(y)}" r="3" fill="#000000"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
