"""Finite intersections of tropical hypersurfaces.

A cell of ``Y = Y_1 ∩ ... ∩ Y_k`` is identified by the tuple of argmin sets
(one per factor) at any of its relative-interior points; this tuple is also
the decomposition of its dual cell into faces of the factors' subdivisions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import gcd
from typing import Sequence

from . import _cdd
from ._linalg import det, lattice_length, primitive, rank, sub
from .errors import DimMismatch, NotProper
from .exactgeom import Polytope, convex_hull, minkowski_sum_all
from .tropoly import (
    TropicalComplex,
    ValuedPolynomial,
    build_complex,
    dual_cell_constraints,
    hypersurface,
    tropical_product,
)


@dataclass(frozen=True)
class IntersectionReport:
    """The intersection complex with each cell's dual decomposition in ``cell.dual``."""

    factors: tuple[ValuedPolynomial, ...]
    complex: TropicalComplex
    proper: bool
    vacuous: bool = False
    notes: tuple = field(default=(), compare=False)

    @property
    def n(self) -> int:
        return self.complex.ambient_dim

    @property
    def k(self) -> int:
        return len(self.factors)

    def summands(self, i: int) -> list[Polytope]:
        cell = self.complex.cells[i]
        return [convex_hull(f.support[j] for j in face) for f, face in zip(self.factors, cell.dual)]

    def summand_dims(self, i: int) -> list[int]:
        return [P.dim for P in self.summands(i)]

    def dual_cell(self, i: int) -> Polytope:
        return minkowski_sum_all(self.summands(i))


def _as_poly(h) -> ValuedPolynomial:
    if isinstance(h, ValuedPolynomial):
        return h
    if isinstance(h, TropicalComplex) and h.sources:
        return h.sources[0]
    raise TypeError("expected a hypersurface built from a valued polynomial")


def intersect(hypersurfaces: Sequence) -> IntersectionReport:
    """Intersect tropical hypersurfaces (complexes from ``hypersurface`` or polynomials)."""
    polys = [_as_poly(h) for h in hypersurfaces]
    if not polys:
        raise ValueError("nothing to intersect")
    n = polys[0].n_vars
    if any(f.n_vars != n for f in polys):
        raise DimMismatch("hypersurfaces live in different ambient spaces")
    complexes = [h if isinstance(h, TropicalComplex) else hypersurface(h) for h in hypersurfaces]
    partial = [((c.dual,), list(c.eqs), list(c.ineqs)) for c in complexes[0].cells]
    for X in complexes[1:]:
        grown = []
        for duals, eqs, ineqs in partial:
            for c in X.cells:
                e2, i2 = eqs + list(c.eqs), ineqs + list(c.ineqs)
                if _cdd.feasible(n, e2, i2):
                    grown.append((duals + (c.dual,), e2, i2))
        partial = grown
    raw = []
    for duals, eqs, ineqs in partial:
        res = _cdd.vrep(n, eqs, ineqs)
        if res is None:
            continue
        vs, rays, _ = res
        x = tuple(sum(col) / len(vs) for col in zip(*vs))
        for r in rays:
            x = tuple(a + b for a, b in zip(x, r))
        if tuple(f.argmin(x) for f in polys) != duals:
            continue
        raw.append({"eqs": eqs, "ineqs": ineqs, "dual": duals, "weight": None})
    Y = build_complex(n, raw, sources=tuple(polys))
    Y = _with_weights(Y, polys)
    k = len(polys)
    if Y.is_empty:
        return IntersectionReport(tuple(polys), Y, True, True, ("empty intersection counted as proper",))
    return IntersectionReport(tuple(polys), Y, Y.dim == n - k)


def _maximal_minor_gcd(rows) -> int:
    k, n = len(rows), len(rows[0])
    g = 0
    for cols in combinations(range(n), k):
        g = gcd(g, abs(int(det([[r[c] for c in cols] for r in rows]))))
    return g


def _with_weights(Y: TropicalComplex, polys) -> TropicalComplex:
    """Attach multiplicities to the top cells of a transversal intersection."""
    n, k = Y.ambient_dim, len(polys)
    cells = []
    for c in Y.cells:
        w = None
        if c.dim == n - k:
            edges = []
            for f, face in zip(polys, c.dual):
                pts = sorted(f.support[j] for j in face)
                if len(pts) >= 2 and rank([sub(p, pts[0]) for p in pts[1:]]) == 1:
                    edges.append((pts[0], pts[-1]))
            if len(edges) == k:
                length = 1
                for a, b in edges:
                    length *= int(lattice_length(a, b))
                prims = [primitive(sub(b, a)) for a, b in edges]
                w = length * _maximal_minor_gcd(prims)
        cells.append(type(c)(c.vertex_ids, c.rays, c.lines, c.dim, w, c.dual, c.eqs, c.ineqs))
    return TropicalComplex(Y.ambient_dim, Y.vertices, tuple(cells), Y.sources)


def is_proper(report: IntersectionReport) -> bool:
    """``dim Y == n - k``; an empty intersection counts as proper (see ``report.vacuous``)."""
    return report.proper


@dataclass(frozen=True)
class TransversalityCertificate:
    transversal: bool
    exhaustive: bool
    failures: tuple = ()  # (subset, cell index in that subset's intersection)
    improper_subsets: tuple = ()


def _transversal_cells(report: IntersectionReport) -> list[int]:
    bad = []
    for i, c in enumerate(report.complex.cells):
        dims = report.summand_dims(i)
        if report.dual_cell(i).dim != sum(dims):
            bad.append(i)
    return bad


def is_transversal(report: IntersectionReport, max_exhaustive: int = 4) -> TransversalityCertificate:
    """Check dual dimensions add up on every cell of every sub-intersection with at least two factors.

    For more than ``max_exhaustive`` factors only the full set and all pairs are
    checked and the certificate is marked non-exhaustive.
    """
    if not report.proper:
        raise NotProper("transversality is only defined for proper intersections")
    k = report.k
    if k == 1:
        return TransversalityCertificate(True, True)
    if k <= max_exhaustive:
        subsets = [J for r in range(2, k + 1) for J in combinations(range(k), r)]
        exhaustive = True
    else:
        subsets = list(combinations(range(k), 2)) + [tuple(range(k))]
        exhaustive = False
    failures, improper = [], []
    for J in subsets:
        sub_report = report if len(J) == k else intersect([report.factors[j] for j in J])
        if not sub_report.proper:
            improper.append(J)
            continue
        failures.extend((J, i) for i in _transversal_cells(sub_report))
    ok = not failures and not improper
    return TransversalityCertificate(ok, exhaustive, tuple(failures), tuple(improper))


@dataclass(frozen=True)
class MixedCell:
    cell: frozenset  # indices into the product support
    summands: tuple  # per factor, indices into that factor's support
    polytope: Polytope


def mixed_cells(f_list: Sequence[ValuedPolynomial]) -> list[MixedCell]:
    """Top-dimensional cells of the product subdivision whose summands all have positive dimension.

    Works directly on the lower hull of the tropical product: each maximal cell
    is dual to a vertex x of the union, and its summands are the factors'
    argmin sets at x.
    """
    polys = [_as_poly(f) for f in f_list]
    prod = polys[0]
    for f in polys[1:]:
        prod = tropical_product(prod, f)
    sub_ = prod.subdivision()
    n = prod.n_vars
    out = []
    for cell in sub_.cells:
        if sub_.face_dims[cell] != n:
            continue
        eqs, ineqs = dual_cell_constraints(prod, cell)
        vs, _, _ = _cdd.vrep(n, eqs, ineqs)
        x = vs[0]
        parts = tuple(f.argmin(x) for f in polys)
        dims = [convex_hull(f.support[j] for j in p).dim for f, p in zip(polys, parts)]
        if all(d >= 1 for d in dims):
            out.append(MixedCell(cell, parts, sub_.cell_polytope(cell)))
    return out


def balancing_defects(report: IntersectionReport) -> dict:
    """Vertices of a weighted curve where the weighted primitive directions do not sum to zero."""
    Y = report.complex
    n = Y.ambient_dim
    defects = {}
    one_cells = [c for c in Y.cells if c.dim == 1]
    for v in Y.vertex_ids_of_dim0():
        acc = [0] * n
        for c in one_cells:
            if v not in c.vertex_ids or c.weight is None:
                continue
            if c.rays:
                d = c.rays[0]
            else:
                other = next(j for j in c.vertex_ids if j != v)
                d = primitive(sub(Y.vertices[other], Y.vertices[v]))
            acc = [a + c.weight * x for a, x in zip(acc, d)]
        if any(acc):
            defects[v] = tuple(acc)
    return defects


# --- Newton degeneracy -----------------------------------------------------


def _edge_restrictions(f: ValuedPolynomial):
    """Edges of new(f) as (direction, univariate coefficient list, vertex indices)."""
    P = f.newton_polytope()
    out = []
    if P.dim == 0:
        return out
    if P.dim == 1:
        edges = [frozenset(range(len(P.vertices)))]
    elif P.dim == 2:
        edges = [s for s in P.hrep.incidence if len(s) == 2]
    else:
        h = P.hrep
        faces = set()
        for a, b in combinations(h.incidence, 2):
            s = a & b
            if len(s) == 2:
                faces.add(s)
        edges = [s for s in faces if rank([sub(P.vertices[j], P.vertices[i]) for i in s for j in s]) == 1]
    for e in edges:
        lo, hi = sorted(P.vertices[i] for i in e)
        u = primitive(sub(hi, lo))
        steps = int(lattice_length(lo, hi))
        by_exp = {t.exp: t.coeff for t in f.terms}
        coeffs = []
        for s in range(steps + 1):
            pt = tuple(int(l) + s * d for l, d in zip(lo, u))
            coeffs.append(by_exp.get(pt, Fraction(0)) or Fraction(0))
        out.append((u, coeffs, e, P))
    return out


def newton_degeneracy(f_list: Sequence[ValuedPolynomial]) -> str:
    """``'degenerate'`` when a sound certificate of Newton-degeneracy is found, else ``'unknown'``.

    The certificate: edges ``A_i`` of the Newton polytopes, all parallel and
    forming a face of their sum, whose restrictions share a nonzero root
    (as polynomials in the monomial along the edge direction).
    """
    polys = [_as_poly(f) for f in f_list]
    if len(polys) < 2 or any(t.coeff is None for f in polys for t in f.terms):
        return "unknown"
    per = [_edge_restrictions(f) for f in polys]
    for combo in product(*per):
        u = combo[0][0]
        if any(c[0] != u and c[0] != tuple(-x for x in u) for c in combo):
            continue
        coeff_lists = [c[1] if c[0] == u else c[1][::-1] for c in combo]
        if not _common_normal(combo):
            continue
        g = coeff_lists[0]
        for other in coeff_lists[1:]:
            g = _gcd_poly(g, other)
        if len(g) >= 2:
            return "degenerate"
    return "unknown"


def _gcd_poly(a, b):
    def trim(p):
        while p and p[-1] == 0:
            p = p[:-1]
        return p

    a, b = trim(list(a)), trim(list(b))
    while b:
        r = list(a)
        while len(r) >= len(b) and r:
            f = r[-1] / b[-1]
            shift = len(r) - len(b)
            for i, c in enumerate(b):
                r[shift + i] -= f * c
            r = trim(r)
        a, b = b, r
    return a


def _common_normal(combo) -> bool:
    """Whether some direction w selects each edge as the maximal face of its polytope."""
    n = len(combo[0][0])
    eqs, ineqs = [], []
    for u, _, e, P in combo:
        eqs.append((tuple(Fraction(x) for x in u), Fraction(0)))
        base = P.vertices[next(iter(e))]
        for j, v in enumerate(P.vertices):
            if j not in e:
                # w.(v - base) <= -1
                ineqs.append((sub(v, base), Fraction(-1)))
    return _cdd.feasible(n, eqs, ineqs)
