"""Tropical lines: combinatorial types, caterpillars and self-intersection experiments.

A line in R^n has n+1 leaves; leaf i <= n points along e_i and leaf n+1 along
-(e_1 + ... + e_n).  Rooting the tree at leaf n+1 turns every internal vertex
into a cluster (the set of leaves <= n below it), so a type is a set of
clusters forming a binary hierarchy on {1..n}.  The edge above cluster K
points along e_K = sum of e_i for i in K, which makes balancing automatic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from . import _cdd
from ._linalg import add, primitive, q, sub, vec
from .arrangement import IntersectionReport, intersect, is_transversal
from .errors import (
    ConstructionFailed,
    DegenerateProjection,
    NotACaterpillar,
    OverlapDegenerate,
)
from .project import (
    PlaneCurveImage,
    RationalProjection,
    is_generic,
    _on_piece,
    meet,
    node_points,
    project_curve,
    self_intersections,
)
from .tropoly import Cell, TropicalComplex, ValuedPolynomial, tropical_product

Cluster = frozenset


def count_line_types(n: int) -> int:
    """Number of combinatorial types of generic lines in R^n: 1 * 3 * 5 * ... * (2n - 3)."""
    if n < 2:
        raise ValueError("lines need n >= 2")
    out = 1
    for k in range(1, 2 * n - 2, 2):
        out *= k
    return out


def _children(clusters, K):
    """Maximal proper sub-clusters and leaves directly below K."""
    below = [C for C in clusters if C < K]
    maximal = [C for C in below if not any(C < D for D in below)]
    covered = set().union(*maximal) if maximal else set()
    leaves = [frozenset({i}) for i in sorted(K - covered)]
    return sorted(maximal, key=sorted) + leaves


def enumerate_line_types(n: int) -> list[frozenset]:
    """All types as sets of clusters, generated by inserting leaves one at a time."""
    if n < 2:
        raise ValueError("lines need n >= 2")
    types = [frozenset({Cluster({1, 2})})]
    for k in range(3, n + 1):
        grown = []
        for t in types:
            nodes = list(t) + [Cluster({i}) for i in range(1, k)]
            for X in nodes:
                new = {C | {k} if X < C else C for C in t}
                new.add(X | {k})
                grown.append(frozenset(new))
        types = grown
    return types


def type_label(n: int, clusters) -> str:
    """Split notation of a type, e.g. ``[12,34]``; splits are listed by their side without leaf n+1."""
    full = Cluster(range(1, n + 1))
    parts = []
    for C in sorted((C for C in clusters if C != full), key=lambda c: (len(c), sorted(c))):
        rest = sorted(set(range(1, n + 2)) - C)
        parts.append("".join(map(str, sorted(C))) + "|" + "".join(map(str, rest)))
    if n == 3 and len(parts) == 1:
        a, b = parts[0].split("|")
        a, b = sorted([a, b])
        return f"[{a},{b}]"
    return "[" + ", ".join(parts) + "]"


@dataclass(frozen=True)
class TropicalLine:
    n: int
    clusters: frozenset  # internal vertices, always including {1..n}
    lengths: dict = field(hash=False)  # cluster -> positive length of the edge above it (root excluded)
    base: tuple = ()  # position of the root vertex (the one next to leaf n+1)

    def __post_init__(self):
        full = Cluster(range(1, self.n + 1))
        if full not in self.clusters:
            raise ValueError("the full leaf set must be a cluster")
        if len(self.clusters) != self.n - 1:
            raise ValueError("a trivalent line in R^n has n-1 vertices")
        for K in self.clusters:
            if len(_children(self.clusters, K)) != 2:
                raise ValueError(f"vertex {sorted(K)} is not trivalent")
            if K != full and not q(self.lengths[K]) > 0:
                raise ValueError("edge lengths must be positive")
        if not self.base:
            object.__setattr__(self, "base", tuple(Fraction(0) for _ in range(self.n)))

    def direction(self, K) -> tuple[int, ...]:
        return tuple(1 if i + 1 in K else 0 for i in range(self.n))

    def parent(self, K):
        above = [C for C in self.clusters if K < C]
        return min(above, key=len) if above else None

    @property
    def positions(self) -> dict:
        full = Cluster(range(1, self.n + 1))
        pos = {full: vec(self.base)}
        for K in sorted(self.clusters, key=len, reverse=True):
            if K == full:
                continue
            P = self.parent(K)
            pos[K] = add(pos[P], tuple(q(self.lengths[K]) * x for x in self.direction(K)))
        return pos

    def rays(self) -> list[tuple]:
        """(cluster the ray starts at, leaf label, direction)."""
        out = []
        for K in self.clusters:
            for ch in _children(self.clusters, K):
                if len(ch) == 1:
                    i = next(iter(ch))
                    out.append((K, i, self.direction(ch)))
        full = Cluster(range(1, self.n + 1))
        out.append((full, self.n + 1, tuple(-1 for _ in range(self.n))))
        return sorted(out, key=lambda r: r[1])

    def edges(self) -> list[tuple]:
        """(parent cluster, child cluster) for every bounded edge."""
        return sorted(((self.parent(K), K) for K in self.clusters if self.parent(K) is not None), key=lambda e: sorted(e[1]))

    @property
    def is_caterpillar(self) -> bool:
        """Internal vertices lie on one path, i.e. the tree has diameter n."""
        full = Cluster(range(1, self.n + 1))
        for K in self.clusters:
            inner = sum(1 for ch in _children(self.clusters, K) if len(ch) > 1) + (K != full)
            if inner > 2:
                return False
        return True

    def label(self) -> str:
        return type_label(self.n, self.clusters)

    def complex(self) -> TropicalComplex:
        pos = self.positions
        order = sorted(set(pos.values()))
        index = {v: i for i, v in enumerate(order)}
        cells = []
        for a, b in self.edges():
            pa, pb = pos[a], pos[b]
            eqs, ineqs = _cdd.hrep([pa, pb])
            ids = tuple(sorted((index[pa], index[pb])))
            cells.append(Cell(ids, (), (), 1, 1, ("edge", tuple(sorted(b))), tuple(eqs), tuple(ineqs)))
        for K, leaf, d in self.rays():
            eqs, ineqs = _cdd.hrep([pos[K]], [d])
            cells.append(Cell((index[pos[K]],), (primitive(d),), (), 1, 1, ("ray", leaf), tuple(eqs), tuple(ineqs)))
        for v in order:
            eqs, ineqs = _cdd.hrep([v])
            cells.append(Cell((index[v],), (), (), 0, None, ("vertex",), tuple(eqs), tuple(ineqs)))
        cells.sort(key=lambda c: (-c.dim, c.vertex_ids, c.rays))
        return TropicalComplex(self.n, tuple(order), tuple(cells))

    def balanced(self) -> bool:
        pos = self.positions
        for K in self.clusters:
            acc = [0] * self.n
            for ch in _children(self.clusters, K):
                acc = [a + b for a, b in zip(acc, self.direction(ch))]
            P = self.parent(K)
            if P is None:
                acc = [a - 1 for a in acc]
            else:
                acc = [a - b for a, b in zip(acc, self.direction(K))]
            if any(acc):
                return False
        return pos is not None


def caterpillar_chain(n: int) -> list[Cluster]:
    """Clusters {1,2} < {1,2,3} < ... < {1..n} of the standard caterpillar."""
    return [Cluster(range(1, j + 1)) for j in range(2, n + 1)]


def caterpillar(n: int, edge_lengths: Sequence | None = None, positions: Sequence | None = None):
    """Standard caterpillar line in R^n with its complete-intersection system.

    Vertex p_0 is the origin and ``p_j = p_{j-1} - l_j (e_1 + ... + e_{j+1})``.
    Returns ``(line, forms)`` where ``forms`` are n-1 tropical linear forms
    whose hypersurfaces cut out exactly the line.
    """
    if n < 3:
        raise ValueError("caterpillars need n >= 3")
    if positions is not None:
        pts = [vec(p) for p in positions]
        if len(pts) != n - 1 or any(len(p) != n for p in pts):
            raise NotACaterpillar("need n-1 vertices in R^n")
        lengths = []
        for j in range(1, n - 1):
            d = sub(pts[j - 1], pts[j])
            l = d[0]
            want = tuple(l if i <= j else Fraction(0) for i in range(n))
            if not l > 0 or d != want:
                raise NotACaterpillar(f"edge {j} does not point along the caterpillar direction")
            lengths.append(l)
        origin = pts[0]
    else:
        lengths = [q(x) for x in edge_lengths] if edge_lengths is not None else [Fraction(1)] * (n - 2)
        if len(lengths) != n - 2 or any(not l > 0 for l in lengths):
            raise NotACaterpillar("need n-2 positive edge lengths")
        origin = tuple(Fraction(0) for _ in range(n))
    chain = caterpillar_chain(n)
    total = sum(lengths, Fraction(0))
    # the root {1..n} sits at p_{n-2}
    p = list(origin)
    for j, l in enumerate(lengths, start=1):
        for i in range(j + 1):
            p[i] -= l
    lens = {chain[j - 1]: lengths[j - 1] for j in range(1, n - 1)}
    line = TropicalLine(n, frozenset(chain), lens, tuple(p))
    forms = caterpillar_forms(n, lengths, origin)
    assert total >= 0
    return line, forms


def caterpillar_forms(n: int, lengths: Sequence, origin=None) -> list[ValuedPolynomial]:
    """Tropical linear forms cutting out the standard caterpillar (x_{n+1} read as the constant 0)."""
    lengths = [q(x) for x in lengths]

    def e(i):
        return tuple(1 if k == i - 1 else 0 for k in range(n))  # i == n+1 gives the constant term

    forms = [{e(1): 0, e(2): 0, e(3): 0, e(4): lengths[0]}]
    for i in range(2, n):
        forms.append({e(i): lengths[i - 2], e(i + 1): 0, e(i + 2): 0})
    polys = [ValuedPolynomial.from_valuations(f) for f in forms]
    if origin is not None and any(origin):
        polys = [translate_polynomial(f, origin) for f in polys]
    return polys


def translate_polynomial(f: ValuedPolynomial, b) -> ValuedPolynomial:
    """The valued polynomial whose hypersurface is that of f moved by b."""
    b = vec(b)
    data = {t.exp: t.val - sum(a * x for a, x in zip(t.exp, b)) for t in f.terms}
    return ValuedPolynomial.from_valuations(data, f.prime, f.collision)


def random_caterpillar(n: int, rng: random.Random) -> TropicalLine:
    """Caterpillar with a random leaf order, random positive lengths and a random base point."""
    leaves = list(range(1, n + 2))
    rng.shuffle(leaves)
    root = n + 1
    splits = [set(leaves[: j + 1]) for j in range(1, n - 1)]
    clusters = {Cluster(range(1, n + 1))}
    for S in splits:
        side = S if root not in S else set(range(1, n + 2)) - S
        clusters.add(Cluster(side))
    lengths = {K: Fraction(rng.randint(1, 12), rng.randint(1, 4)) for K in clusters if len(K) < n}
    base = tuple(Fraction(rng.randint(-3, 3)) for _ in range(n))
    return TropicalLine(n, frozenset(clusters), lengths, base)


def random_line(n: int, rng: random.Random) -> TropicalLine:
    """Line of a uniformly random combinatorial type."""
    t = rng.choice(enumerate_line_types(n))
    full = Cluster(range(1, n + 1))
    lengths = {K: Fraction(rng.randint(1, 12), rng.randint(1, 4)) for K in t if K != full}
    base = tuple(Fraction(rng.randint(-3, 3)) for _ in range(n))
    return TropicalLine(n, t, lengths, base)


def random_matrix(n: int, rng: random.Random, bound: int = 5):
    while True:
        A = [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(2)]
        try:
            RationalProjection.of(A)
        except Exception:
            continue
        return A


# --- self-intersection experiments -----------------------------------------


def sip_count(curve, A) -> int:
    """Unweighted self-intersection count; raises on degenerate projections."""
    img = project_curve(curve, A)
    if not is_generic(img):
        raise OverlapDegenerate("two pieces of the image overlap")
    return len(self_intersections(img))


def node_count(curve, A) -> int:
    """Self-intersections plus transversal crossings of two branches at a vertex."""
    img = project_curve(curve, A)
    if not is_generic(img):
        raise OverlapDegenerate("two pieces of the image overlap")
    return len(node_points(img))


def _generic_count(curve, A):
    try:
        return sip_count(curve, A)
    except (DegenerateProjection, OverlapDegenerate):
        return None


def lower_bound_projection(n: int, max_scale: int = 4) -> RationalProjection:
    """A 2 x n projection under which the standard caterpillar has C(n-1, 2) self-intersections.

    Columns are added one at a time.  Adding column m+1 moves the root image
    one unit further along the old ray towards -(e_1 + ... + e_m) and
    attaches the new ray e_{m+1} there; that ray is aimed at a point of the
    image of the e_2 ray just past its last crossing, so it can cross every
    earlier ray.  Each candidate is accepted only on an exact count.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    A = [[-2, 1, 0], [1, 0, 1]]
    for m in range(3, n):
        line, _ = caterpillar(m)
        img = project_curve(line.complex(), A)
        ray2 = next(p for p in img.pieces if p.kind == "ray" and p.source_direction == vec(line.direction({2})))
        crossings = [_on_piece(ray2, s.point) for s in self_intersections(img)]
        last = max((t for t in crossings if t is not None), default=Fraction(0))
        s_m = [sum(r) for r in A]
        root = img.vertex_images[0]  # the root is lexicographically smallest
        start = sub(root, s_m)
        target = comb(m, 2)
        nxt, _ = caterpillar(m + 1)
        found = None
        for step in (Fraction(1, 2), Fraction(1), Fraction(2), Fraction(1, 4), Fraction(4)):
            d = primitive(sub(ray2.point(last + step), start))
            for c in range(1, max_scale + 1):
                B = [A[0] + [c * d[0]], A[1] + [c * d[1]]]
                if _generic_count(nxt.complex(), B) == target:
                    found = B
                    break
            if found:
                break
        if found is None:
            raise ConstructionFailed(f"no aimed column reaches C({m}, 2) for n={m + 1}")
        A = found
    return RationalProjection.of(A)


@dataclass(frozen=True)
class BoundCheck:
    count: int
    bound: int
    ok: bool
    caterpillar: bool


def check_caterpillar_bound(line: TropicalLine, A) -> BoundCheck:
    """Compare the self-intersection count with C(n-1, 2).

    Non-caterpillar lines are accepted too; their result is only a probe.
    """
    c = sip_count(line.complex(), A)
    bound = comb(line.n - 1, 2)
    return BoundCheck(c, bound, c <= bound, line.is_caterpillar)


def sweep(n: int, trials: int, seed: int, family: str = "caterpillar") -> list[dict]:
    """Random lines under random generic integer projections; degenerate draws are redrawn."""
    rng = random.Random(seed)
    rows = []
    for t in range(trials):
        while True:
            line = random_caterpillar(n, rng) if family == "caterpillar" else random_line(n, rng)
            A = random_matrix(n, rng)
            try:
                res = check_caterpillar_bound(line, A)
            except (DegenerateProjection, OverlapDegenerate):
                continue
            break
        rows.append({"n": n, "trial": t, "count": res.count, "bound": res.bound, "ok": res.ok})
    return rows


# --- perturbed products ----------------------------------------------------


def product_of(polys: Sequence[ValuedPolynomial]) -> ValuedPolynomial:
    out = polys[0]
    for f in polys[1:]:
        out = tropical_product(out, f)
    return out


def perturb(f: ValuedPolynomial, offsets: Sequence) -> ValuedPolynomial:
    data = {t.exp: t.val + q(o) for t, o in zip(f.terms, offsets)}
    return ValuedPolynomial.from_valuations(data, f.prime)


def product_pair_system():
    """Two products of two perturbed linear forms each, with a projection whose image crosses itself often."""
    F = Fraction
    eps = [F(1, 1000), F(3, 1000), F(5, 1000), F(7, 1000)]
    dlt = [F(11, 1000), F(13, 1000), F(17, 1000), F(1, 1000)]
    x, y, z, c = (1, 0, 0), (0, 1, 0), (0, 0, 1), (0, 0, 0)
    a_eps = ValuedPolynomial.from_valuations({x: eps[0], y: eps[1], z: 1 + eps[2], c: 3 + eps[3]})
    a_0 = ValuedPolynomial.from_valuations({x: 0, y: 0, z: 1, c: 3})
    b_dlt = ValuedPolynomial.from_valuations({x: 1 + dlt[0], y: dlt[1], z: dlt[2], c: dlt[3]})
    b_0 = ValuedPolynomial.from_valuations({x: 1, y: 0, z: 0, c: 0})
    A = [[1, 0, 1], [0, 1, 2]]
    return {
        "factors1": (a_eps, a_0),
        "factors2": (b_dlt, b_0),
        "f1": tropical_product(a_eps, a_0),
        "f2": tropical_product(b_dlt, b_0),
        "A": A,
    }


@dataclass(frozen=True)
class PerturbedProduct:
    report: IntersectionReport
    projection: RationalProjection
    base_forms: tuple
    factors: tuple  # per form, the tuple of perturbed copies
    seed: int
    guaranteed: int


def perturbed_product_curve(n: int, degrees: Sequence[int], seed: int = 0, max_retries: int = 20) -> PerturbedProduct:
    """Products of perturbed copies of the caterpillar forms, under the lower-bound projection.

    Copy 0 of each form is unperturbed; the other copies get distinct
    valuation offsets of size k/1000.  Draws whose intersection is not
    transversal or whose image is degenerate are redrawn with the next seed.
    """
    if len(degrees) != n - 1:
        raise ValueError("need one degree per form")
    line, forms = caterpillar(n)
    proj = lower_bound_projection(n)
    guaranteed = 1
    for d in degrees:
        guaranteed *= d
    guaranteed = guaranteed**2 * comb(n - 1, 2)
    for attempt in range(max_retries):
        rng = random.Random(seed + attempt)
        pool = rng.sample(range(1, 400), sum(len(f.terms) * (d - 1) for f, d in zip(forms, degrees)))
        it = iter(pool)
        factors = []
        for f, d in zip(forms, degrees):
            copies = [f] + [perturb(f, [Fraction(next(it), 1000) for _ in f.terms]) for _ in range(d - 1)]
            factors.append(tuple(copies))
        products = [product_of(c) for c in factors]
        report = intersect(products)
        if not report.proper or not is_transversal(report).transversal:
            continue
        if _generic_count(report, proj.A) is None:
            continue
        return PerturbedProduct(report, proj, tuple(forms), tuple(factors), seed + attempt, guaranteed)
    raise ConstructionFailed("no generic perturbation found")


def component_of(point, factor_lists) -> tuple[int, ...]:
    """Which linear factor of each product is tropically active at a point (first tie-free choice)."""
    out = []
    for facs in factor_lists:
        hits = [i for i, f in enumerate(facs) if f.on_hypersurface(point)]
        out.append(tuple(hits))
    return tuple(out)


def sips_between(line1: TropicalComplex, line2: TropicalComplex, A, include_common: bool = False) -> list[tuple]:
    """Points where the images of two curves meet.

    Images of points the two curves share in the source are skipped unless
    ``include_common`` is set.

    Returns ``(point, kinds)`` with ``kinds`` the set of (piece kind in line1, piece kind in line2).
    """
    proj = RationalProjection.of(A)
    P1, P2 = project_curve(line1, proj.A), project_curve(line2, proj.A)
    found: dict = {}
    for a in P1.pieces:
        for b in P2.pieces:
            m = meet(a, b)
            if m is None:
                continue
            if m == "overlap":
                raise OverlapDegenerate("images of the two curves overlap")
            if not include_common and _preimage(line1, a, m, proj) == _preimage(line2, b, m, proj):
                continue
            found.setdefault(m, set()).add((a.kind, b.kind))
    return sorted(found.items())


def _preimage(Y: TropicalComplex, piece, x, proj: RationalProjection):
    """Point of the cell behind ``piece`` that maps to x."""
    t = _on_piece(piece, x)
    if t is None:
        raise ValueError("point is not on the piece")
    v = Y.vertices[piece.vertex_ids[0]]
    src = vec(piece.source_direction)
    if piece.kind == "ray":
        # the image direction is primitive; A(src) is a multiple g of it
        img = proj(src)
        k = next(i for i, d in enumerate(piece.direction) if d)
        t = t / (img[k] / piece.direction[k])
    return add(v, tuple(t * s for s in src))
