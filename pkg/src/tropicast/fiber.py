"""Fiber polytopes of linear functionals and their mixed versions.

For a polytope P and a functional psi the fiber polytope is the Minkowski
integral of the slices ``P ∩ {psi = x}`` over ``x ∈ psi(P)``.  Between two
consecutive vertex values the slices vary linearly, so the integral is the
exact finite sum of ``(b - a) * slice((a + b) / 2)`` over those intervals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Sequence

from . import _cdd
from ._linalg import add, dot, q, vec
from .errors import (
    DimMismatch,
    EmptySlice,
    MixedFiberNotCertified,
    NotAFacet,
    NotAPolytope,
    TieError,
)
from .exactgeom import (
    Polytope,
    convex_hull,
    face_in_direction,
    minkowski_difference,
    minkowski_sum,
    minkowski_sum_all,
    point_polytope,
)


@dataclass(frozen=True)
class LinearFunctional:
    """An integer functional ``x -> coeffs . x`` with primitive coefficient vector."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)
        if not any(c):
            raise ValueError("functional must be nonzero")
        g = 0
        for x in c:
            g = gcd(g, abs(x))
        if g != 1:
            raise ValueError(f"coefficients {c} are not primitive")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def of(cls, psi) -> LinearFunctional:
        return psi if isinstance(psi, LinearFunctional) else cls(tuple(psi))

    def __call__(self, x) -> Fraction:
        return dot(self.coeffs, vec(x))

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def range_of(self, P: Polytope) -> tuple[Fraction, Fraction]:
        vals = [self(v) for v in P.vertices]
        return min(vals), max(vals)


@dataclass(frozen=True)
class FiberPolytope:
    polytope: Polytope
    psi: LinearFunctional
    source: str = "plain"  # or "mixed"
    factors: tuple = ()


def _check(P: Polytope, psi: LinearFunctional):
    if P.ambient_dim != psi.dim:
        raise DimMismatch("functional and polytope live in different spaces")


def slice_at(P: Polytope, psi, level) -> Polytope:
    """``P ∩ {psi = level}``; raises EmptySlice when the level misses P."""
    psi = LinearFunctional.of(psi)
    _check(P, psi)
    level = q(level)
    lo, hi = psi.range_of(P)
    if not lo <= level <= hi:
        raise EmptySlice(f"level {level} outside [{lo}, {hi}]")
    if lo == hi:
        return P
    h = P.hrep
    eqs = list(h.eqs) + [(tuple(Fraction(c) for c in psi.coeffs), level)]
    res = _cdd.vrep(P.ambient_dim, eqs, list(h.ineqs))
    if res is None:
        raise EmptySlice(f"level {level} misses the polytope")
    return convex_hull(res[0])


def breakpoints(P: Polytope, psi: LinearFunctional, extra=()) -> list[Fraction]:
    pts = {psi(v) for v in P.vertices} | {q(x) for x in extra}
    lo, hi = psi.range_of(P)
    return sorted(x for x in pts if lo <= x <= hi)


def fiber_polytope(P: Polytope, psi, extra_breakpoints=()) -> FiberPolytope:
    """Minkowski integral of the slices of P along psi.

    ``extra_breakpoints`` refines the interval partition; the result does not
    depend on it.
    """
    psi = LinearFunctional.of(psi)
    _check(P, psi)
    cuts = breakpoints(P, psi, extra_breakpoints)
    acc = point_polytope([0] * P.ambient_dim)
    for a, b in zip(cuts, cuts[1:]):
        acc = minkowski_sum(acc, slice_at(P, psi, (a + b) / 2).scale(b - a))
    return FiberPolytope(acc, psi, "plain", (P,))


def mixed_fiber_polytope(P_list: Sequence[Polytope], psi) -> FiberPolytope:
    """Mixed fiber polytope by the alternating sum over sub-sums, certified by re-addition.

    The sub-sums of size k enter with sign ``(-1)**(r + k)``; positive and
    negative parts are collected and one Minkowski difference is taken.
    """
    psi = LinearFunctional.of(psi)
    P_list = list(P_list)
    r = len(P_list)
    if r == 0:
        raise ValueError("need at least one polytope")
    if r == 1:
        fp = fiber_polytope(P_list[0], psi)
        return FiberPolytope(fp.polytope, psi, "mixed", tuple(P_list))
    n = P_list[0].ambient_dim
    pos, neg = [], []
    for k in range(1, r + 1):
        for S in combinations(range(r), k):
            fp = fiber_polytope(minkowski_sum_all([P_list[i] for i in S]), psi).polytope
            (pos if (r + k) % 2 == 0 else neg).append(fp)
    plus = minkowski_sum_all(pos, n)
    minus = minkowski_sum_all(neg, n)
    try:
        M = minkowski_difference(plus, minus)
    except NotAPolytope as e:
        raise MixedFiberNotCertified(f"alternating sum is not a genuine polytope: {e}") from e
    return FiberPolytope(M, psi, "mixed", tuple(P_list))


def slice_argmax_at(P: Polytope, psi, level, w) -> tuple[Fraction, ...]:
    """The unique maximizer of ``w . x`` on the slice at ``level``."""
    S = slice_at(P, psi, level)
    face = face_in_direction(S, w) if any(vec(w)) else S
    if not face.is_point:
        raise TieError(f"{len(face.vertices)} maximizers on the slice at {level}")
    return face.vertices[0]


def slice_argmax(P: Polytope, psi, i: int, w) -> tuple[Fraction, ...]:
    """Maximizer of ``w . x`` on the slice at ``i + 1/2``."""
    return slice_argmax_at(P, psi, Fraction(i) + Fraction(1, 2), w)


def outside_offset(P: Polytope, inner: tuple, psi, w) -> tuple[Fraction, ...]:
    """Sum of ``(b - a) * argmax`` over the breakpoint intervals of psi(P) outside ``inner``."""
    psi = LinearFunctional.of(psi)
    lo, hi = inner
    cuts = breakpoints(P, psi, (lo, hi))
    t = tuple(Fraction(0) for _ in range(P.ambient_dim))
    for a, b in zip(cuts, cuts[1:]):
        if b <= lo or a >= hi:
            m = slice_argmax_at(P, psi, (a + b) / 2, w)
            t = add(t, tuple((b - a) * x for x in m))
    return t


def face_of_fiber_polytope(P: Polytope, F: Polytope, psi, w) -> tuple[Fraction, ...]:
    """Translation t with ``fiber(F) + t == face_w(fiber(P))`` for ``F = face_w(P)``.

    When psi(F) covers psi(P) nothing is truncated and t is zero.
    """
    psi = LinearFunctional.of(psi)
    if face_in_direction(P, w) != F:
        raise NotAFacet("F is not the face of P in direction w")
    return outside_offset(P, psi.range_of(F), psi, w)


def patchwork_offset(C: Polytope, D: Polytope, w, psi) -> tuple[Fraction, ...]:
    """The point ``mixed(face_w C, D) - face_w mixed(C, D)`` for a mixed cell C + D."""
    psi = LinearFunctional.of(psi)
    w = vec(w)
    if D.dim != 1 or psi.range_of(D)[0] == psi.range_of(D)[1]:
        raise NotAFacet("D must be a segment on which psi is not constant")
    CD = minkowski_sum(C, D)
    Fc = face_in_direction(C, w)
    if face_in_direction(D, w) != D or face_in_direction(CD, w) != minkowski_sum(Fc, D):
        raise NotAFacet("face_w(C) + D is not the face of C + D in direction w")
    if minkowski_sum(Fc, D).dim != CD.dim - 1:
        raise NotAFacet("face_w(C) + D is not a facet of C + D")
    top = mixed_fiber_polytope([Fc, D], psi).polytope
    M = mixed_fiber_polytope([C, D], psi).polytope
    diff = minkowski_difference(top, face_in_direction(M, w) if any(w) else M)
    if not diff.is_point:
        raise NotAFacet("offset is not a single point")
    return diff.vertices[0]


def neighbor_offset(C1, D1, C2, D2, w, psi) -> tuple[Fraction, ...]:
    """Offset between the mixed fiber polytopes of two cells sharing the facet with normal w."""
    a = patchwork_offset(C1, D1, w, psi)
    b = patchwork_offset(C2, D2, tuple(-x for x in vec(w)), psi)
    return tuple(x - y for x, y in zip(a, b))
