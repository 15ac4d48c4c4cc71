"""SVG pictures of plane curve images and planar subdivisions.

Coordinates are converted to floats only here, for drawing.
"""

from __future__ import annotations

import math
from pathlib import Path
from xml.sax.saxutils import escape

from .errors import NotPlanar
from .exactgeom import RegularSubdivision
from .project import Piece, PlaneCurveImage
from .tropoly import TropicalComplex

SIZE = 400
MARGIN = 30


class _Frame:
    """Affine map from a bounding box onto a square panel, y pointing up."""

    def __init__(self, pts, x0=0.0):
        xs = [float(p[0]) for p in pts] or [0.0]
        ys = [float(p[1]) for p in pts] or [0.0]
        self.lo = (min(xs), min(ys))
        span = max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
        self.k = (SIZE - 2 * MARGIN) / span
        self.x0 = x0
        self.span = span

    def __call__(self, p):
        x = self.x0 + MARGIN + (float(p[0]) - self.lo[0]) * self.k
        y = SIZE - MARGIN - (float(p[1]) - self.lo[1]) * self.k
        return round(x, 3), round(y, 3)


def _line(a, b, cls) -> str:
    return f'<line class="{cls}" x1="{a[0]}" y1="{a[1]}" x2="{b[0]}" y2="{b[1]}"/>'


def _polygon(pts, cls) -> str:
    return f'<polygon class="{cls}" points="{" ".join(f"{x},{y}" for x, y in pts)}"/>'


def _text(p, s) -> str:
    return f'<text x="{p[0]}" y="{p[1]}">{escape(str(s))}</text>'


def _ordered(vertices):
    """Vertices of a convex polygon in counter-clockwise order."""
    if len(vertices) < 3:
        return list(vertices)
    cx = sum(float(v[0]) for v in vertices) / len(vertices)
    cy = sum(float(v[1]) for v in vertices) / len(vertices)
    return sorted(vertices, key=lambda v: math.atan2(float(v[1]) - cy, float(v[0]) - cx))


def _curve_panel(pieces, vertices, sips) -> list[str]:
    base = _Frame(list(vertices) + list(sips))
    ray_len = base.span * 0.75 + 1
    far = {}
    for p in pieces:
        if p.kind == "ray":
            norm = max(abs(float(d)) for d in p.direction)
            far[p.face] = tuple(float(o) + ray_len * float(d) / norm for o, d in zip(p.origin, p.direction))
    # the frame also covers the drawn ends of the rays, so nothing leaves the panel
    frame = _Frame(list(vertices) + list(sips) + list(far.values()))
    out = []
    for p in pieces:
        a = frame(p.origin)
        if p.kind == "edge":
            out.append(_line(a, frame(p.end), "edge"))
        else:
            out.append(_line(a, frame(far[p.face]), "ray"))
    for v in vertices:
        x, y = frame(v)
        out.append(f'<circle class="vertex" cx="{x}" cy="{y}" r="2.5"/>')
    for s in sips:
        x, y = frame(s)
        out.append(f'<circle class="sip" cx="{x}" cy="{y}" r="5"/>')
    return out


def _cells_panel(polys, labels, x0) -> list[str]:
    pts = [v for P in polys for v in P]
    frame = _Frame(pts, x0)
    out = []
    for P, lab in zip(polys, labels):
        ring = [frame(v) for v in _ordered(P)]
        if len(ring) >= 3:
            out.append(_polygon(ring, "cell"))
        elif len(ring) == 2:
            out.append(_line(ring[0], ring[1], "cell"))
        if lab is not None and ring:
            cx = round(sum(x for x, _ in ring) / len(ring), 3)
            cy = round(sum(y for _, y in ring) / len(ring), 3)
            out.append(_text((cx, cy), lab))
    return out


def _subdivision_cells(sub: RegularSubdivision):
    polys = []
    for cell in sub.cells:
        polys.append(list(sub.cell_polytope(cell).vertices))
    return polys


def render_svg(payload) -> str:
    """SVG text for a plane curve image, a planar subdivision or a planar complex."""
    body: list[str] = []
    width = SIZE
    if isinstance(payload, PlaneCurveImage):
        if payload.projection.rows != 2:
            raise NotPlanar("image is not in the plane")
        body += _curve_panel(payload.pieces, payload.vertex_images, [s.point for s in payload.sips or ()])
        cells = [c for c in (payload.dual_subdivision or ()) if c.image is not None]
        if cells:
            body += _cells_panel([list(c.image.vertices) for c in cells], [f"p={c.p}" for c in cells], SIZE)
            width = 2 * SIZE
    elif isinstance(payload, RegularSubdivision):
        if payload.points and len(payload.points[0]) != 2:
            raise NotPlanar("subdivision is not planar")
        body += _cells_panel(_subdivision_cells(payload), [None] * len(payload.cells), 0)
    elif isinstance(payload, TropicalComplex):
        if payload.ambient_dim != 2:
            raise NotPlanar(f"complex lives in dimension {payload.ambient_dim}")
        pieces = []
        for i, c in enumerate(payload.cells):
            if c.dim != 1:
                continue
            o = payload.vertices[c.vertex_ids[0]]
            if c.rays:
                pieces.append(Piece(i, "ray", o, c.rays[0], c.vertex_ids, c.rays[0]))
            else:
                e = payload.vertices[c.vertex_ids[1]]
                pieces.append(Piece(i, "edge", o, tuple(b - a for a, b in zip(o, e)), c.vertex_ids, ()))
        body += _curve_panel(pieces, payload.vertices, [])
    else:
        raise NotPlanar(f"cannot draw {type(payload).__name__}")
    style = (
        "<style>line{stroke:#222;stroke-width:1.5}line.ray{stroke:#555}"
        "polygon.cell{fill:#eef;stroke:#224;stroke-width:1}circle.vertex{fill:#222}"
        "circle.sip{fill:none;stroke:#c00;stroke-width:2}text{font:11px sans-serif;text-anchor:middle}</style>"
    )
    head = f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{SIZE}" viewBox="0 0 {width} {SIZE}">'
    return "\n".join([head, style, *body, "</svg>"]) + "\n"


def emit_svg(payload, path) -> Path:
    path = Path(path)
    path.write_text(render_svg(payload))
    return path
