"""Valued polynomials, tropicalization and tropical hypersurfaces.

Tropical arithmetic is (min, +): a point w lies on the hypersurface of f when
``min_a val(c_a) + a.w`` is attained by at least two terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from . import _cdd
from ._linalg import add, dot, lattice_length, primitive, q, rank, sub, vec
from .errors import (
    DimMismatch,
    EmptyHypersurface,
    NotPrime,
    PointNotOnComplex,
    ZeroPolynomial,
)
from .exactgeom import Polytope, RegularSubdivision, convex_hull, lower_hull_subdivision

INF = math.inf


def _is_prime(p) -> bool:
    if not isinstance(p, int) or isinstance(p, bool) or p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def padic_valuation(x, p: int):
    """Exponent of the prime p in the rational x; ``math.inf`` for zero."""
    if not _is_prime(p):
        raise NotPrime(f"{p!r} is not a prime")
    x = q(x)
    if x == 0:
        return INF
    v = 0
    num, den = abs(x.numerator), x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return Fraction(v)


@dataclass(frozen=True)
class Term:
    exp: tuple[int, ...]
    val: Fraction
    coeff: Fraction | None = None


@dataclass(frozen=True)
class ValuedPolynomial:
    """A polynomial remembered only through its support and coefficient valuations.

    Terms are kept sorted by exponent.  ``collision`` records that two
    exponents were merged somewhere upstream (the smaller valuation won).
    """

    n_vars: int
    terms: tuple[Term, ...]
    prime: int | None = None
    collision: bool = False

    def __post_init__(self):
        exps = [t.exp for t in self.terms]
        if len(set(exps)) != len(exps):
            raise ValueError("repeated exponent in valued polynomial")
        if any(len(e) != self.n_vars for e in exps):
            raise DimMismatch("exponent length differs from n_vars")
        if any(t.val == INF for t in self.terms):
            raise ValueError("terms of infinite valuation must be dropped")
        object.__setattr__(self, "terms", tuple(sorted(self.terms, key=lambda t: t.exp)))

    @classmethod
    def from_valuations(cls, data: Mapping | Iterable, prime=None, collision=False):
        """Build from ``{exp: val}`` or an iterable of ``(exp, val)`` pairs."""
        items = data.items() if isinstance(data, Mapping) else data
        terms = [Term(tuple(int(a) for a in e), q(v)) for e, v in items]
        if not terms:
            raise ZeroPolynomial("no terms")
        return cls(len(terms[0].exp), tuple(terms), prime, collision)

    @cached_property
    def support(self) -> tuple[tuple[int, ...], ...]:
        return tuple(t.exp for t in self.terms)

    @cached_property
    def valuations(self) -> tuple[Fraction, ...]:
        return tuple(t.val for t in self.terms)

    def newton_polytope(self) -> Polytope:
        return convex_hull(self.support)

    def subdivision(self) -> RegularSubdivision:
        return lower_hull_subdivision(list(zip(self.support, self.valuations)))

    def evaluate(self, w) -> Fraction:
        """Value of the tropical polynomial (a minimum of affine functions) at w."""
        w = vec(w)
        return min(t.val + dot(t.exp, w) for t in self.terms)

    def argmin(self, w) -> frozenset:
        """Indices of terms attaining the minimum at w."""
        w = vec(w)
        vals = [t.val + dot(t.exp, w) for t in self.terms]
        m = min(vals)
        return frozenset(i for i, v in enumerate(vals) if v == m)

    def on_hypersurface(self, w) -> bool:
        return len(self.argmin(w)) >= 2

    def shift(self, c) -> ValuedPolynomial:
        """Add a constant to every valuation (multiply by a scalar of valuation c)."""
        c = q(c)
        return ValuedPolynomial(
            self.n_vars, tuple(Term(t.exp, t.val + c) for t in self.terms), self.prime, self.collision
        )

    def __mul__(self, other: ValuedPolynomial) -> ValuedPolynomial:
        return tropical_product(self, other)


def tropical_product(f: ValuedPolynomial, g: ValuedPolynomial) -> ValuedPolynomial:
    """Support sums with valuation sums; colliding exponents keep the minimum."""
    if f.n_vars != g.n_vars:
        raise DimMismatch("factors live in different numbers of variables")
    acc: dict = {}
    collision = f.collision or g.collision
    for s in f.terms:
        for t in g.terms:
            e = tuple(a + b for a, b in zip(s.exp, t.exp))
            v = s.val + t.val
            if e in acc:
                collision = True
                acc[e] = min(acc[e], v)
            else:
                acc[e] = v
    terms = tuple(Term(e, v) for e, v in acc.items())
    return ValuedPolynomial(f.n_vars, terms, f.prime if f.prime == g.prime else None, collision)


def tropicalize(f: Mapping | Iterable, p: int) -> ValuedPolynomial:
    """Valued polynomial of ``f`` given as ``{exponent: coefficient}`` or pairs."""
    if not _is_prime(p):
        raise NotPrime(f"{p!r} is not a prime")
    items = list(f.items() if isinstance(f, Mapping) else f)
    terms = []
    for e, c in items:
        c = q(c)
        if c == 0:
            continue
        terms.append(Term(tuple(int(a) for a in e), padic_valuation(c, p), c))
    if not terms:
        raise ZeroPolynomial("polynomial has no nonzero coefficient")
    return ValuedPolynomial(len(terms[0].exp), tuple(terms), p)


# --- polyhedral complexes --------------------------------------------------


@dataclass(frozen=True)
class Cell:
    """A polyhedron ``conv(vertices) + cone(rays) + span(lines)`` with its H-description.

    ``eqs``/``ineqs`` use ``a.x == b`` / ``a.x <= b``.  ``dual`` links to the
    dual face: a frozenset of support indices for a hypersurface, a tuple of
    such sets (one per factor) for an intersection.
    """

    vertex_ids: tuple[int, ...]
    rays: tuple[tuple[int, ...], ...]
    lines: tuple[tuple[int, ...], ...]
    dim: int
    weight: int | None
    dual: object
    eqs: tuple = field(repr=False, default=())
    ineqs: tuple = field(repr=False, default=())

    @property
    def is_bounded(self) -> bool:
        return not self.rays and not self.lines

    def contains(self, x) -> bool:
        return all(dot(a, x) == b for a, b in self.eqs) and all(dot(a, x) <= b for a, b in self.ineqs)


@dataclass(frozen=True)
class TropicalComplex:
    ambient_dim: int
    vertices: tuple[tuple[Fraction, ...], ...]
    cells: tuple[Cell, ...]
    sources: tuple = field(default=(), compare=False, repr=False)

    @property
    def dim(self) -> int:
        return max((c.dim for c in self.cells), default=-1)

    @property
    def is_empty(self) -> bool:
        return not self.cells

    def cells_of_dim(self, k: int) -> list[int]:
        return [i for i, c in enumerate(self.cells) if c.dim == k]

    def maximal_cells(self) -> list[int]:
        return [i for i, c in enumerate(self.cells) if c.dim == self.dim]

    def relative_interior_point(self, i: int):
        c = self.cells[i]
        pts = [self.vertices[j] for j in c.vertex_ids]
        pt = tuple(sum(col) / len(pts) for col in zip(*pts))
        for r in c.rays:
            pt = add(pt, vec(r))
        return pt

    def contains(self, x) -> bool:
        x = vec(x)
        return any(c.contains(x) for c in self.cells)

    def cells_containing(self, x) -> list[int]:
        x = vec(x)
        return [i for i, c in enumerate(self.cells) if c.contains(x)]

    def vertex_ids_of_dim0(self) -> list[int]:
        """Global vertex ids that are 0-dimensional cells."""
        return [c.vertex_ids[0] for c in self.cells if c.dim == 0]


def build_complex(n: int, raw_cells: Sequence[dict], sources=()) -> TropicalComplex:
    """Assemble a complex from cells given by H-descriptions.

    Each entry of ``raw_cells`` holds ``eqs``, ``ineqs``, ``dual``, ``weight``
    and optionally ``dim`` (checked).  Empty cells are skipped.
    """
    verts: dict = {}
    staged = []
    for rc in raw_cells:
        res = _cdd.vrep(n, rc["eqs"], rc["ineqs"])
        if res is None:
            continue
        vs, rays, lines = res
        d = rank([sub(v, vs[0]) for v in vs[1:]] + list(rays) + list(lines))
        if "dim" in rc and rc["dim"] != d:
            raise AssertionError(f"cell dimension {d} differs from expected {rc['dim']}")
        for v in vs:
            verts.setdefault(v, None)
        staged.append((vs, rays, lines, d, rc))
    order = sorted(verts)
    index = {v: i for i, v in enumerate(order)}
    cells = []
    for vs, rays, lines, d, rc in staged:
        cells.append(
            Cell(
                tuple(sorted(index[v] for v in vs)),
                tuple(sorted(primitive(r) for r in rays)),
                tuple(sorted(_canon_line(l) for l in lines)),
                d,
                rc.get("weight"),
                rc["dual"],
                tuple(rc["eqs"]),
                tuple(rc["ineqs"]),
            )
        )
    cells.sort(key=lambda c: (-c.dim, c.vertex_ids, c.rays, c.lines))
    return TropicalComplex(n, tuple(order), tuple(cells), tuple(sources))


def _canon_line(l):
    p = primitive(l)
    first = next(x for x in p if x)
    return p if first > 0 else tuple(-x for x in p)


def dual_cell_constraints(f: ValuedPolynomial, face: frozenset):
    """H-description of the region where exactly the terms in ``face`` (at least) are minimal."""
    idx = sorted(face)
    a0 = idx[0]
    t0 = f.terms[a0]
    eqs, ineqs = [], []
    for b in idx[1:]:
        tb = f.terms[b]
        # val_a + a.w == val_b + b.w
        eqs.append((vec(sub(t0.exp, tb.exp)), tb.val - t0.val))
    for c, tc in enumerate(f.terms):
        if c in face:
            continue
        ineqs.append((vec(sub(t0.exp, tc.exp)), tc.val - t0.val))
    return eqs, ineqs


def hypersurface(f: ValuedPolynomial) -> TropicalComplex:
    """The tropical hypersurface of f, one cell per positive-dimensional subdivision face."""
    if len(f.terms) < 2:
        raise EmptyHypersurface("a single term never attains its minimum twice")
    sub_ = f.subdivision()
    raw = []
    for face in sub_.faces:
        k = sub_.face_dims[face]
        if k == 0:
            continue
        eqs, ineqs = dual_cell_constraints(f, face)
        weight = None
        if k == 1:
            ends = sorted(f.support[i] for i in face)
            weight = int(lattice_length(ends[0], ends[-1]))
        raw.append({"eqs": eqs, "ineqs": ineqs, "dual": face, "weight": weight, "dim": f.n_vars - k})
    return build_complex(f.n_vars, raw, sources=(f,))


# --- local cones -----------------------------------------------------------


def _tangent_constraints(cell: Cell, x):
    eqs = [(a, Fraction(0)) for a, _ in cell.eqs]
    ineqs = [(a, Fraction(0)) for a, b in cell.ineqs if dot(a, x) == b]
    return eqs, ineqs


def local_cone(X: TropicalComplex, x) -> TropicalComplex:
    """The fan of directions y with x + t*y in X for all small t > 0."""
    x = vec(x)
    if len(x) != X.ambient_dim:
        raise DimMismatch("point has the wrong length")
    hits = X.cells_containing(x)
    if not hits:
        raise PointNotOnComplex(f"{x} is not on the complex")
    raw = []
    for i in hits:
        eqs, ineqs = _tangent_constraints(X.cells[i], x)
        raw.append({"eqs": eqs, "ineqs": ineqs, "dual": X.cells[i].dual, "weight": X.cells[i].weight})
    fan = build_complex(X.ambient_dim, raw)
    uniq = {}
    for c in fan.cells:
        uniq.setdefault((c.rays, c.lines), c)
    cones = list(uniq.values())
    keep = [c for c in cones if not any(d.dim > c.dim and _cone_in(c, d) for d in cones)]
    return TropicalComplex(X.ambient_dim, fan.vertices, tuple(keep))


def _cone_in(c: Cell, d: Cell) -> bool:
    gens = [vec(r) for r in c.rays] + [vec(l) for l in c.lines] + [tuple(-x for x in vec(l)) for l in c.lines]
    return all(d.contains(g) for g in gens)


def is_totally_concave_at(X: TropicalComplex, x) -> bool:
    """Whether the convex hull of the local cone at x is a linear subspace."""
    fan = local_cone(X, x)
    n = X.ambient_dim
    rays = [vec(r) for c in fan.cells for r in c.rays]
    lines = [vec(l) for c in fan.cells for l in c.lines]
    if not rays:
        return True
    _, ineqs = _cdd.hrep([tuple(Fraction(0) for _ in range(n))], rays, lines)
    return not ineqs
