"""Exact rational convex geometry.

Polytopes are stored by their irredundant vertex list in lexicographic order,
so two polytopes are equal exactly when their vertex tuples are equal.  Hull
and facet computations go through cddlib in exact (GMP rational) mode; the
surrounding logic works in the affine hull of the input, so lower-dimensional
polytopes in a bigger ambient space are handled uniformly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import factorial
from typing import Iterable, Sequence

from . import _cdd
from ._linalg import add, affine_hull, det, dot, nullspace, q, rank, sub, vec
from .errors import DimMismatch, EmptyInput, NotAPolytope, ZeroDirection

Point = tuple[Fraction, ...]


def _project(points, pivots):
    return [tuple(p[i] for i in pivots) for p in points]


@dataclass(frozen=True)
class HRep:
    """Facet description ``eqs: a.x == b`` and ``ineqs: a.x <= b``.

    ``incidence[i]`` lists the vertex indices tight on inequality ``i``.
    """

    eqs: tuple
    ineqs: tuple
    incidence: tuple


@dataclass(frozen=True)
class Polytope:
    ambient_dim: int
    vertices: tuple[Point, ...]

    @cached_property
    def dim(self) -> int:
        if len(self.vertices) <= 1:
            return 0
        base = self.vertices[0]
        return rank([sub(v, base) for v in self.vertices[1:]])

    @cached_property
    def hrep(self) -> HRep:
        return _facets(self.vertices, self.ambient_dim)

    def support(self, w) -> Fraction:
        w = vec(w)
        return max(dot(w, v) for v in self.vertices)

    def translate(self, t) -> Polytope:
        t = vec(t)
        return Polytope(self.ambient_dim, tuple(sorted(add(v, t) for v in self.vertices)))

    def scale(self, c) -> Polytope:
        c = q(c)
        if c == 0:
            return point_polytope([0] * self.ambient_dim)
        vs = (tuple(c * x for x in v) for v in self.vertices)
        return Polytope(self.ambient_dim, tuple(sorted(vs)))

    def image(self, matrix) -> Polytope:
        """Polytope under a linear map given as a list of rows."""
        rows = [vec(r) for r in matrix]
        return convex_hull([tuple(dot(r, v) for r in rows) for v in self.vertices])

    def contains(self, x) -> bool:
        x = vec(x)
        h = self.hrep
        return all(dot(a, x) == b for a, b in h.eqs) and all(dot(a, x) <= b for a, b in h.ineqs)

    @property
    def is_point(self) -> bool:
        return len(self.vertices) == 1

    def centroid(self) -> Point:
        n = len(self.vertices)
        return tuple(sum(c) / n for c in zip(*self.vertices))

    def __repr__(self):
        vs = ", ".join("(" + ",".join(str(x) for x in v) + ")" for v in self.vertices)
        return f"Polytope(dim={self.dim}, [{vs}])"


def point_polytope(p) -> Polytope:
    p = vec(p)
    return Polytope(len(p), (p,))


def _facets(vertices, n) -> HRep:
    base, basis, piv = affine_hull(list(vertices))
    d = len(piv)
    if d == 0:
        eqs = tuple((tuple(Fraction(int(i == j)) for j in range(n)), base[i]) for i in range(n))
        return HRep(eqs, (), ())
    # affine hull equalities: normals orthogonal to the direction space
    normals = nullspace(basis, n)
    eqs = tuple((nv, dot(nv, base)) for nv in normals)
    proj = _project(vertices, piv)
    if d == 1:
        vals = [p[0] for p in proj]
        lo, hi = min(vals), max(vals)
        e = [Fraction(0)] * n
        e[piv[0]] = Fraction(1)
        ineqs = ((tuple(e), hi), (tuple(-x for x in e), -lo))
    else:
        _, hs = _cdd.hrep(proj)
        ineqs = []
        for a, b in hs:
            full = [Fraction(0)] * n
            for j, c in zip(piv, a):
                full[j] = c
            ineqs.append((tuple(full), b))
        ineqs = tuple(ineqs)
    incidence = tuple(
        frozenset(i for i, v in enumerate(vertices) if dot(a, v) == b) for a, b in ineqs
    )
    return HRep(eqs, ineqs, incidence)


def convex_hull(points: Iterable[Sequence]) -> Polytope:
    """Irredundant, lexicographically ordered vertex set of the hull."""
    pts = sorted({vec(p) for p in points})
    if not pts:
        raise EmptyInput("convex hull of an empty point set")
    n = len(pts[0])
    if any(len(p) != n for p in pts):
        raise DimMismatch("points of different lengths")
    if len(pts) <= 2:
        return Polytope(n, tuple(pts))
    _, _, piv = affine_hull(pts)
    d = len(piv)
    if d <= 1:
        return Polytope(n, (pts[0], pts[-1]) if d == 1 else (pts[0],))
    proj = _project(pts, piv)
    _, hs = _cdd.hrep(proj)
    verts = []
    for p, pp in zip(pts, proj):
        tight = [a for a, b in hs if dot(a, pp) == b]
        if len(tight) >= d and rank(tight) == d:
            verts.append(p)
    return Polytope(n, tuple(verts))


def minkowski_sum(P: Polytope, Q: Polytope) -> Polytope:
    if P.ambient_dim != Q.ambient_dim:
        raise DimMismatch(f"ambient dims {P.ambient_dim} and {Q.ambient_dim}")
    if Q.is_point:
        return P.translate(Q.vertices[0])
    if P.is_point:
        return Q.translate(P.vertices[0])
    return convex_hull(add(p, r) for p, r in product(P.vertices, Q.vertices))


def minkowski_sum_all(polys: Sequence[Polytope], ambient_dim: int | None = None) -> Polytope:
    if not polys:
        if ambient_dim is None:
            raise EmptyInput("empty Minkowski sum needs an ambient dimension")
        return point_polytope([0] * ambient_dim)
    acc = polys[0]
    for P in polys[1:]:
        acc = minkowski_sum(acc, P)
    return acc


def face_in_direction(P: Polytope, w) -> Polytope:
    """The face of P on which ``w . x`` is maximal."""
    w = vec(w)
    if len(w) != P.ambient_dim:
        raise DimMismatch("direction has the wrong length")
    if not any(w):
        raise ZeroDirection("face_in_direction needs a nonzero direction")
    vals = [dot(w, v) for v in P.vertices]
    m = max(vals)
    return Polytope(P.ambient_dim, tuple(v for v, x in zip(P.vertices, vals) if x == m))


def _interior_normal(P: Polytope, i: int):
    """A direction in the interior of the normal cone of vertex ``i``."""
    h = P.hrep
    acc = [Fraction(0)] * P.ambient_dim
    for (a, _), inc in zip(h.ineqs, h.incidence):
        if i in inc:
            acc = [x + y for x, y in zip(acc, a)]
    return tuple(acc)


def minkowski_difference(P: Polytope, Q: Polytope) -> Polytope:
    """The polytope R with ``Q + R == P``.

    Candidate vertices come from subtracting Q's vertex in a direction interior
    to each vertex normal cone of P; the answer is certified by re-adding.
    Raises NotAPolytope when no such R exists.
    """
    if P.ambient_dim != Q.ambient_dim:
        raise DimMismatch(f"ambient dims {P.ambient_dim} and {Q.ambient_dim}")
    if Q.is_point:
        return P.translate(tuple(-x for x in Q.vertices[0]))
    if Q.dim > P.dim or len(Q.vertices) > len(P.vertices):
        raise NotAPolytope("subtrahend is too large")
    cands = []
    for i, v in enumerate(P.vertices):
        w = _interior_normal(P, i)
        if not any(w):
            raise NotAPolytope("subtrahend is not a point but P is")
        face = face_in_direction(Q, w)
        if not face.is_point:
            raise NotAPolytope("normal fan of P does not refine that of Q")
        cands.append(sub(v, face.vertices[0]))
    R = convex_hull(cands)
    if minkowski_sum(Q, R) != P:
        raise NotAPolytope("re-addition does not reproduce P")
    return R


# --- volumes ---------------------------------------------------------------


def _simplices(vertices):
    """Pulling triangulation of a full-dimensional point configuration's hull."""
    d = len(vertices[0])
    if d == 0:
        return [[vertices[0]]]
    if len(vertices) == d + 1:
        return [list(vertices)]
    if d == 1:
        vals = sorted(vertices)
        return [[vals[0], vals[-1]]]
    v0 = vertices[0]
    _, hs = _cdd.hrep(vertices)
    out = []
    for a, b in hs:
        if dot(a, v0) == b:
            continue
        facet = [v for v in vertices if dot(a, v) == b]
        _, _, piv = affine_hull(facet)
        sub_proj = _project(facet, piv)
        sub_hull = convex_hull(sub_proj).vertices
        lookup = {tuple(p[i] for i in piv): p for p in facet}
        for s in _simplices(list(sub_hull)):
            out.append([v0] + [lookup[x] for x in s])
    return out


def normalized_volume(P: Polytope) -> Fraction:
    """``d! * vol`` of P measured in the coordinates of its affine hull's pivot columns.

    For full-dimensional lattice polytopes this is the usual normalized volume.
    """
    if P.dim == 0:
        return Fraction(1)
    _, _, piv = affine_hull(list(P.vertices))
    proj = _project(P.vertices, piv)
    total = Fraction(0)
    for s in _simplices(proj):
        total += abs(det([sub(x, s[0]) for x in s[1:]]))
    return total


# --- regular subdivisions --------------------------------------------------


@dataclass(frozen=True)
class RegularSubdivision:
    """Projection of the lower hull of lifted support points.

    ``cells`` are the maximal cells and ``faces`` all cells of all dimensions,
    each given as the frozenset of support indices lying on it (so points that
    sit on a cell without being a vertex are included).
    """

    points: tuple[Point, ...]
    lifts: tuple[Fraction, ...]
    cells: tuple[frozenset, ...]
    faces: tuple[frozenset, ...]
    face_dims: dict = field(compare=False, hash=False, repr=False)
    dim: int = 0

    def cell_polytope(self, idx: frozenset) -> Polytope:
        return convex_hull(self.points[i] for i in idx)

    def faces_of_dim(self, k: int):
        return [f for f in self.faces if self.face_dims[f] == k]


def _face_closure(generators: list[frozenset]) -> set[frozenset]:
    faces = set(generators)
    stack = list(generators)
    while stack:
        f = stack.pop()
        for g in generators:
            h = f & g
            if h and h not in faces:
                faces.add(h)
                stack.append(h)
    return faces


def lower_hull_subdivision(support: Sequence[tuple[Sequence, object]]) -> RegularSubdivision:
    """Regular subdivision induced by lifting ``point -> lift``.

    Cells are projections of lower facets (outer normal with negative last
    coordinate).  Ties are kept as non-simplicial cells.
    """
    if not support:
        raise EmptyInput("empty support")
    pts = [vec(p) for p, _ in support]
    lifts = [q(h) for _, h in support]
    if len(set(pts)) != len(pts):
        raise ValueError("support points must be distinct")
    _, _, piv = affine_hull(pts)
    d = len(piv)
    everything = frozenset(range(len(pts)))
    if d == 0:
        return RegularSubdivision(tuple(pts), tuple(lifts), (everything,), (everything,), {everything: 0}, 0)
    proj = _project(pts, piv)
    lifted = [p + (h,) for p, h in zip(proj, lifts)]
    up = tuple([Fraction(0)] * d + [Fraction(1)])
    _, hs = _cdd.hrep(lifted, rays=[up])
    ray_id = len(pts)
    gens, lower = [], []
    for a, b in hs:
        tight = frozenset(i for i, p in enumerate(lifted) if dot(a, p) == b)
        if a[-1] == 0:
            tight = tight | {ray_id}
        else:
            lower.append(tight)
        gens.append(tight)
    faces = [f for f in _face_closure(gens) if ray_id not in f]
    dims = {}
    for f in faces:
        fp = [proj[i] for i in f]
        dims[f] = 0 if len(fp) == 1 else rank([sub(x, fp[0]) for x in fp[1:]])
    faces.sort(key=lambda f: (-dims[f], sorted(f)))
    cells = tuple(sorted(set(lower), key=sorted))
    return RegularSubdivision(tuple(pts), tuple(lifts), cells, tuple(faces), dims, d)


def lattice_volume_check(sub_: RegularSubdivision) -> bool:
    """Cells tile the hull: normalized volumes of the cells add up to the hull's."""
    hull = convex_hull(sub_.points)
    total = sum(normalized_volume(sub_.cell_polytope(c)) for c in sub_.cells)
    return total == normalized_volume(hull)
