"""Rational projections of tropical curves to the plane.

Covers kernel bases, the lifted and pushed-forward polynomials, images of
curves, self-intersection points, and the dual subdivision of the image
assembled from mixed fiber polytopes.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ._linalg import add, dot, nullspace, primitive, rank, sub, vec
from .arrangement import IntersectionReport
from .errors import (
    DegenerateProjection,
    DimMismatch,
    OverlapDegenerate,
    RankError,
)
from .exactgeom import (
    Polytope,
    convex_hull,
    face_in_direction,
    minkowski_difference,
    minkowski_sum_all,
    normalized_volume,
)
from .fiber import LinearFunctional, mixed_fiber_polytope, patchwork_offset
from .tropoly import Term, TropicalComplex, ValuedPolynomial

Point2 = tuple[Fraction, Fraction]


# --- projections -----------------------------------------------------------


def _int_matrix(A) -> tuple[tuple[int, ...], ...]:
    rows = []
    for r in A:
        row = []
        for x in r:
            fx = Fraction(x) if not isinstance(x, Fraction) else x
            if isinstance(x, float) or fx.denominator != 1:
                raise ValueError("projection matrices must have integer entries")
            row.append(int(fx))
        rows.append(tuple(row))
    if not rows or len({len(r) for r in rows}) != 1:
        raise DimMismatch("ragged or empty matrix")
    return tuple(rows)


def kernel_basis(A) -> list[tuple[int, ...]]:
    """Primitive integer basis of ker A, one vector per free column of the row echelon form.

    Each vector is scaled so its first nonzero entry is positive.
    """
    A = _int_matrix(A)
    n = len(A[0])
    if rank(A) != len(A):
        raise RankError(f"matrix of {len(A)} rows has rank {rank(A)}")
    out = []
    for v in nullspace(A, n):
        p = primitive(v)
        if next(x for x in p if x) < 0:
            p = tuple(-x for x in p)
        out.append(p)
    return out


@dataclass(frozen=True)
class RationalProjection:
    A: tuple[tuple[int, ...], ...]
    kernel: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, A) -> RationalProjection:
        if isinstance(A, RationalProjection):
            return A
        M = _int_matrix(A)
        return cls(M, tuple(kernel_basis(M)))

    @property
    def n(self) -> int:
        return len(self.A[0])

    @property
    def rows(self) -> int:
        return len(self.A)

    def __call__(self, x) -> tuple[Fraction, ...]:
        x = vec(x)
        return tuple(dot(r, x) for r in self.A)

    @property
    def psi(self) -> LinearFunctional:
        """The complementary functional of a projection with one-dimensional kernel."""
        if len(self.kernel) != 1:
            raise ValueError("complementary functional needs a one-dimensional kernel")
        return LinearFunctional(self.kernel[0])


def lift_polynomial(f: ValuedPolynomial, kernel: Sequence[Sequence[int]]) -> ValuedPolynomial:
    """Push the support through ``a -> (a, v1.a, ..., vl.a)``; valuations are unchanged."""
    kernel = [tuple(int(x) for x in v) for v in kernel]
    if any(len(v) != f.n_vars for v in kernel):
        raise DimMismatch("kernel vectors must have one entry per variable")
    terms = []
    for t in f.terms:
        extra = tuple(sum(a * b for a, b in zip(v, t.exp)) for v in kernel)
        terms.append(Term(t.exp + extra, t.val, t.coeff))
    return ValuedPolynomial(f.n_vars + len(kernel), tuple(terms), f.prime, f.collision)


def monomial_pushforward(f: ValuedPolynomial, A) -> ValuedPolynomial:
    """Map each exponent a to ``A a``; merged exponents keep the smaller valuation and set ``collision``."""
    A = _int_matrix(A)
    if len(A[0]) != f.n_vars:
        raise DimMismatch("matrix width differs from the number of variables")
    acc: dict = {}
    collision = f.collision
    for t in f.terms:
        e = tuple(sum(a * b for a, b in zip(r, t.exp)) for r in A)
        if e in acc:
            collision = True
            if t.val < acc[e].val:
                acc[e] = Term(e, t.val)
        else:
            acc[e] = Term(e, t.val, t.coeff)
    return ValuedPolynomial(len(A), tuple(acc.values()), f.prime, collision)


# --- image of a curve ------------------------------------------------------


@dataclass(frozen=True)
class Piece:
    """Image of one 1-dimensional cell: ``origin + t * direction`` for t in [0, 1] (edge) or t >= 0 (ray)."""

    face: int
    kind: str  # "edge" or "ray"
    origin: Point2
    direction: Point2
    vertex_ids: tuple[int, ...]
    source_direction: tuple[Fraction, ...]

    @property
    def end(self) -> Point2 | None:
        return add(self.origin, self.direction) if self.kind == "edge" else None

    def point(self, t) -> Point2:
        return tuple(o + t * d for o, d in zip(self.origin, self.direction))

    @property
    def t_max(self):
        return Fraction(1) if self.kind == "edge" else None


@dataclass(frozen=True)
class SelfIntersection:
    point: Point2
    pairs: tuple  # (face, face) for every pair of non-adjacent pieces through the point
    kinds: tuple  # matching ("ray"|"edge", "ray"|"edge") per pair


@dataclass(frozen=True)
class DualCell:
    point: Point2  # the image vertex this cell is dual to
    p: int
    preimages: tuple  # ("vertex", id) or ("edge", face id)
    summands: tuple  # per preimage: tuple of index sets into each factor's support
    polytope: Polytope | None = None  # placed cell in the source space
    image: Polytope | None = None  # the placed cell pushed forward by A
    raw: Polytope | None = None  # unplaced sum of mixed fiber polytopes
    offset: tuple | None = None  # translation from A(raw) to image


@dataclass(frozen=True)
class PlaneCurveImage:
    projection: RationalProjection
    curve: TropicalComplex
    pieces: tuple[Piece, ...]
    vertex_images: tuple[Point2, ...]
    sips: tuple[SelfIntersection, ...] | None = None
    dual_subdivision: tuple[DualCell, ...] | None = None
    notes: tuple = field(default=(), compare=False)


def _curve_of(curve) -> TropicalComplex:
    return curve.complex if isinstance(curve, IntersectionReport) else curve


def project_curve(curve, A) -> PlaneCurveImage:
    """Map vertices, edges and rays of a 1-dimensional complex by x -> A x."""
    Y = _curve_of(curve)
    proj = RationalProjection.of(A)
    if proj.n != Y.ambient_dim:
        raise DimMismatch("matrix width differs from the curve's ambient dimension")
    if proj.rows != 2:
        raise DimMismatch("curves are projected to the plane")
    if Y.dim > 1:
        raise ValueError("expected a complex of dimension at most one")
    vimg = tuple(proj(v) for v in Y.vertices)
    pieces = []
    for i, c in enumerate(Y.cells):
        if c.dim != 1:
            continue
        if c.rays:
            r = vec(c.rays[0])
            d = proj(r)
            if not any(d):
                raise DegenerateProjection(f"ray {c.rays[0]} lies in the kernel")
            d = tuple(Fraction(x) for x in primitive(d))
            pieces.append(Piece(i, "ray", vimg[c.vertex_ids[0]], d, c.vertex_ids, r))
        else:
            a, b = c.vertex_ids
            d = sub(vimg[b], vimg[a])
            if not any(d):
                raise DegenerateProjection(f"edge {i} collapses to a point")
            pieces.append(Piece(i, "edge", vimg[a], d, c.vertex_ids, sub(Y.vertices[b], Y.vertices[a])))
    return PlaneCurveImage(proj, Y, tuple(pieces), vimg)


def _cross(u, v) -> Fraction:
    return u[0] * v[1] - u[1] * v[0]


def _within(t, t_max) -> bool:
    return t >= 0 and (t_max is None or t <= t_max)


def meet(P: Piece, Q: Piece):
    """Intersection of two closed pieces: None, a point, or ``("overlap", length>0)``."""
    d1, d2 = P.direction, Q.direction
    w = sub(Q.origin, P.origin)
    c = _cross(d1, d2)
    if c != 0:
        t = _cross(w, d2) / c
        s = _cross(w, d1) / c
        if _within(t, P.t_max) and _within(s, Q.t_max):
            return P.point(t)
        return None
    if _cross(w, d1) != 0:
        return None
    # collinear: parametrize Q along P's line
    dd = dot(d1, d1)
    s0 = dot(w, d1) / dd
    k = dot(d2, d1) / dd
    lo1, hi1 = Fraction(0), P.t_max
    if Q.t_max is None:
        lo2, hi2 = (s0, None) if k > 0 else (None, s0)
    else:
        a, b = s0, s0 + k
        lo2, hi2 = min(a, b), max(a, b)
    lo = lo1 if lo2 is None else max(lo1, lo2)
    if hi1 is None and hi2 is None:
        return "overlap"
    hi = hi2 if hi1 is None else (hi1 if hi2 is None else min(hi1, hi2))
    if lo > hi:
        return None
    if lo == hi:
        return P.point(lo)
    return "overlap"


def _adjacent(P: Piece, Q: Piece) -> bool:
    return bool(set(P.vertex_ids) & set(Q.vertex_ids))


def self_intersections(image: PlaneCurveImage) -> list[SelfIntersection]:
    """Distinct points where images of two non-adjacent 1-cells meet (closed pieces).

    Raises OverlapDegenerate when two non-adjacent images share a segment.
    """
    found: dict = {}
    ps = image.pieces
    for i in range(len(ps)):
        for j in range(i + 1, len(ps)):
            P, Q = ps[i], ps[j]
            if _adjacent(P, Q):
                continue
            m = meet(P, Q)
            if m is None:
                continue
            if m == "overlap":
                raise OverlapDegenerate(f"images of cells {P.face} and {Q.face} overlap")
            found.setdefault(m, []).append(((P.face, Q.face), (P.kind, Q.kind)))
    out = []
    for pt in sorted(found):
        recs = sorted(found[pt])
        out.append(SelfIntersection(pt, tuple(r[0] for r in recs), tuple(r[1] for r in recs)))
    return out


def _outgoing(Y: TropicalComplex, v: int) -> list[tuple]:
    """Primitive directions of the 1-cells leaving vertex v."""
    out = []
    for c in Y.cells:
        if c.dim != 1 or v not in c.vertex_ids:
            continue
        if c.rays:
            out.append(tuple(primitive(c.rays[0])))
        else:
            other = next(j for j in c.vertex_ids if j != v)
            out.append(tuple(primitive(sub(Y.vertices[other], Y.vertices[v]))))
    return out


def crossing_vertices(curve) -> list[int]:
    """Vertices where the curve is locally two straight lines through the point.

    These are 4-valent vertices whose outgoing directions split into two
    opposite pairs spanning a plane.
    """
    Y = _curve_of(curve)
    found = []
    for v in Y.vertex_ids_of_dim0():
        ds = _outgoing(Y, v)
        if len(ds) != 4 or len(set(ds)) != 4:
            continue
        if all(tuple(-x for x in d) in ds for d in ds) and rank(ds) == 2:
            found.append(v)
    return found


def node_points(image: PlaneCurveImage) -> list[Point2]:
    """Points where two branches of the image cross.

    The strict self-intersection points plus the images of crossing vertices
    whose two branches stay transversal in the plane.
    """
    pts = {s.point for s in self_intersections(image)}
    A = image.projection
    for v in crossing_vertices(image.curve):
        ds = _outgoing(image.curve, v)
        imgs = {tuple(primitive(A(d))) for d in ds if any(A(d))}
        if len(imgs) == 4:
            pts.add(image.vertex_images[v])
    return sorted(pts)


def genericity_defects(image: PlaneCurveImage) -> list[tuple[int, int]]:
    """Pairs of distinct pieces (adjacent or not) whose images share a segment."""
    bad = []
    ps = image.pieces
    for i in range(len(ps)):
        for j in range(i + 1, len(ps)):
            if meet(ps[i], ps[j]) == "overlap":
                bad.append((ps[i].face, ps[j].face))
    return bad


def is_generic(image: PlaneCurveImage) -> bool:
    return not genericity_defects(image)


def with_sips(image: PlaneCurveImage) -> PlaneCurveImage:
    return PlaneCurveImage(
        image.projection, image.curve, image.pieces, image.vertex_images, tuple(self_intersections(image))
    )


# --- dual subdivision of the image -----------------------------------------


def _on_piece(P: Piece, x) -> Fraction | None:
    """Parameter t with P.point(t) == x, or None."""
    w = sub(x, P.origin)
    if _cross(w, P.direction) != 0:
        return None
    t = dot(w, P.direction) / dot(P.direction, P.direction)
    return t if _within(t, P.t_max) else None


@dataclass
class _ImageGraph:
    points: list  # image vertices
    preimages: dict  # point -> list of ("vertex", id) / ("edge", face)
    edges: list  # (point_a, point_b, piece) for bounded image edges between consecutive points


def _image_graph(image: PlaneCurveImage, sips) -> _ImageGraph:
    Y = image.curve
    pts = set(image.vertex_images[v] for v in Y.vertex_ids_of_dim0()) | {s.point for s in sips}
    pre: dict = {p: [] for p in pts}
    for v in Y.vertex_ids_of_dim0():
        pre[image.vertex_images[v]].append(("vertex", v))
    edges = []
    for P in image.pieces:
        on = []
        for x in pts:
            t = _on_piece(P, x)
            if t is None:
                continue
            on.append((t, x))
            ends = {image.vertex_images[v] for v in P.vertex_ids}
            if x not in ends:
                pre[x].append(("edge", P.face))
        on.sort()
        for (_, a), (_, b) in zip(on, on[1:]):
            edges.append((a, b, P))
    return _ImageGraph(sorted(pts), pre, edges)


def _summands_of(report: IntersectionReport, kind: str, ident: int):
    Y = report.complex
    if kind == "vertex":
        cell = next(c for c in Y.cells if c.dim == 0 and c.vertex_ids == (ident,))
    else:
        cell = Y.cells[ident]
    return cell.dual


def _summand_polytopes(report, dual) -> list[Polytope]:
    return [convex_hull(f.support[j] for j in face) for f, face in zip(report.factors, dual)]


def image_dual_subdivision(report: IntersectionReport, A, pushforward: ValuedPolynomial | None = None):
    """Dual subdivision of the projected curve, one cell per image vertex.

    Every cell is the sum of the mixed fiber polytopes of the minimal preimage
    faces of its image vertex; ``p`` counts those faces.  Cells are placed by
    walking bounded image edges: across an unbroken curve edge between two
    single-preimage cells the patchwork offsets are used, elsewhere the shared
    dual edge is matched directly.  Polytopes are produced for curves in
    3-space; otherwise cells carry ``p`` and summands only.

    Returns ``(image, placement_report)``.
    """
    image = project_curve(report, A)
    sips = self_intersections(image)
    graph = _image_graph(image, sips)
    proj = image.projection
    summands = {
        x: tuple(_summands_of(report, kind, ident) for kind, ident in graph.preimages[x]) for x in graph.points
    }
    notes = []
    if report.n != 3 or report.k != 2 or len(proj.kernel) != 1:
        cells = tuple(
            DualCell(x, len(graph.preimages[x]), tuple(graph.preimages[x]), summands[x]) for x in graph.points
        )
        notes.append("cell polytopes are only assembled for curves in 3-space")
        img = PlaneCurveImage(proj, image.curve, image.pieces, image.vertex_images, tuple(sips), cells, tuple(notes))
        return img, PlacementReport(False, {}, (), None)

    psi = proj.psi
    raw: dict = {}
    for x in graph.points:
        parts = []
        for dual in summands[x]:
            parts.append(mixed_fiber_polytope(_summand_polytopes(report, dual), psi).polytope)
        raw[x] = minkowski_sum_all(parts)

    shift = {graph.points[0]: tuple(Fraction(0) for _ in range(3))}
    used_patchwork = {}
    adjacency: dict = {x: [] for x in graph.points}
    for a, b, P in graph.edges:
        D = P.source_direction
        adjacency[a].append((b, D, P))
        adjacency[b].append((a, tuple(-x for x in D), P))
    queue = deque([graph.points[0]])
    while queue:
        a = queue.popleft()
        for b, D, P in adjacency[a]:
            if b in shift:
                continue
            delta = None
            pa, pb = graph.preimages[a], graph.preimages[b]
            if P.kind == "edge" and len(pa) == 1 and len(pb) == 1 and pa[0][0] == "vertex" and pb[0][0] == "vertex":
                res = _patchwork_step(report, pa[0][1], pb[0][1], D, psi)
                if res is not None:
                    used_patchwork[(a, b)] = res
                    delta = res[0]
            if delta is None:
                delta = _glue_step(raw[a], raw[b], D)
            shift[b] = add(shift[a], delta)
            queue.append(b)
    if len(shift) != len(graph.points):
        raise ValueError("image graph is disconnected")

    placed = {x: raw[x].translate(shift[x]) for x in graph.points}
    incoherent = []
    for a, b, P in graph.edges:
        D = P.source_direction
        if face_in_direction(placed[a], tuple(-x for x in D)) != face_in_direction(placed[b], D):
            incoherent.append((a, b))
    images = {x: placed[x].image(proj.A) for x in graph.points}
    align = (Fraction(0), Fraction(0))
    match = None
    if pushforward is not None:
        t = align_with_subdivision(list(images.values()), pushforward)
        match = t is not None
        if t is not None:
            align = t
    cells = tuple(
        DualCell(
            x,
            len(graph.preimages[x]),
            tuple(graph.preimages[x]),
            summands[x],
            placed[x],
            images[x].translate(align),
            raw[x],
            add(proj(shift[x]), align),
        )
        for x in graph.points
    )
    img = PlaneCurveImage(proj, image.curve, image.pieces, image.vertex_images, tuple(sips), cells, tuple(notes))
    return img, PlacementReport(not incoherent, used_patchwork, tuple(incoherent), match)


@dataclass(frozen=True)
class PlacementReport:
    coherent: bool
    patchwork_steps: dict  # (point_a, point_b) -> (shift, v_a, v_b)
    incoherent_edges: tuple
    matches_pushforward: bool | None


def _mixed_pair(report, vertex_id):
    """Split the dual cell at a curve vertex into (2-dim summand, 1-dim summand)."""
    dual = _summands_of(report, "vertex", vertex_id)
    polys = _summand_polytopes(report, dual)
    if sorted(P.dim for P in polys) != [1, 2]:
        return None
    return (polys[0], polys[1]) if polys[0].dim == 2 else (polys[1], polys[0])


def _patchwork_step(report, u, v, D, psi):
    """Translation between the cells at curve vertices u and v joined by an edge of direction D (u to v)."""
    cu, cv = _mixed_pair(report, u), _mixed_pair(report, v)
    if cu is None or cv is None:
        return None
    w = tuple(-x for x in D)  # outer normal of u's cell at the shared facet
    va = patchwork_offset(cu[0], cu[1], w, psi)
    vb = patchwork_offset(cv[0], cv[1], D, psi)
    return (sub(vb, va), va, vb)


def _glue_step(Ka: Polytope, Kb: Polytope, D):
    """Translation taking Kb's dual edge onto Ka's for an image edge with source direction D (a to b)."""
    fa = face_in_direction(Ka, tuple(-x for x in D))
    fb = face_in_direction(Kb, D)
    t = minkowski_difference(fa, fb)
    if not t.is_point:
        raise ValueError("neighbouring cells do not share a dual edge")
    return t.vertices[0]


def align_with_subdivision(cells: Sequence[Polytope], f: ValuedPolynomial):
    """Translation carrying the cells onto the maximal cells of f's lower-hull subdivision, or None."""
    sub_ = f.subdivision()
    target = sorted((sub_.cell_polytope(c) for c in sub_.cells), key=lambda P: P.vertices)
    ours = list(cells)
    if len(ours) != len(target):
        return None
    anchor_t = min(v for P in target for v in P.vertices)
    anchor_o = min(v for P in ours for v in P.vertices)
    t = sub(anchor_t, anchor_o)
    moved = sorted((P.translate(t) for P in ours), key=lambda P: P.vertices)
    return t if moved == target else None


def total_area_check(report: IntersectionReport, cells: Sequence[Polytope], A) -> bool:
    """The placed cells tile the image of the mixed fiber polytope of the whole Newton polytopes."""
    proj = RationalProjection.of(A)
    whole = mixed_fiber_polytope([f.newton_polytope() for f in report.factors], proj.psi).polytope
    whole_img = whole.image(proj.A)
    return sum(normalized_volume(P) for P in cells if P.dim == 2) == normalized_volume(whole_img)
