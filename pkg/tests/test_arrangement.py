import random
from collections import Counter
from fractions import Fraction as F
from itertools import combinations

import numpy as np
import pytest
import sympy
from scipy.spatial import ConvexHull

from tropicast.arrangement import (
    balancing_defects,
    intersect,
    is_proper,
    is_transversal,
    mixed_cells,
    newton_degeneracy,
)
from tropicast.errors import NotProper
from tropicast.exactgeom import convex_hull, minkowski_sum
from tropicast.lines import caterpillar, product_pair_system
from tropicast.tropoly import ValuedPolynomial, tropical_product, tropicalize


def vp(d):
    return ValuedPolynomial.from_valuations(d)


def plane(a, b, c, d):
    return vp({(1, 0, 0): a, (0, 1, 0): b, (0, 0, 1): c, (0, 0, 0): d})


@pytest.fixture(scope="module")
def product_pair():
    E = product_pair_system()
    return E, intersect([E["f1"], E["f2"]])


def qhull_mixed_cells(polys):
    """Mixed cells of a product by qhull on the lifted support, certified in exact arithmetic.

    Each lower facet's affine function is solved exactly through the facet's
    simplex vertices; the dual point w then gives each factor's argmin set.
    """
    prod = polys[0]
    for f in polys[1:]:
        prod = tropical_product(prod, f)
    pts = [tuple(map(F, p)) + (v,) for p, v in zip(prod.support, prod.valuations)]
    den = 1
    for p in pts:
        den = den * p[-1].denominator // np.gcd(den, p[-1].denominator)
    arr = np.array([[float(x) for x in p[:-1]] + [float(p[-1] * den)] for p in pts])
    hull = ConvexHull(arr)
    facets: dict = {}
    for simplex, eq in zip(hull.simplices, hull.equations):
        if eq[-2] >= -1e-9:  # lower facets: last normal coordinate negative
            continue
        facets.setdefault(tuple(np.round(eq, 7)), set()).update(int(i) for i in simplex)
    duals = set()
    n = prod.n_vars
    a = sympy.symbols(f"a0:{n}")
    c = sympy.Symbol("c")
    for members in facets.values():
        eqs = [sum(a[k] * pts[i][k] for k in range(n)) + c - pts[i][-1] for i in members]
        (sol,) = sympy.linsolve(eqs, list(a) + [c])
        assert not any(v.free_symbols for v in sol)
        duals.add(tuple(-F(str(v)) for v in sol[:n]))  # lift = c - w.p on the facet
    combos = Counter()
    for w in duals:
        dims = []
        for f in polys:
            vals = [t.val + sum(F(e) * x for e, x in zip(t.exp, w)) for t in f.terms]
            m = min(vals)
            arg = [f.support[i] for i, v in enumerate(vals) if v == m]
            dims.append(convex_hull(arg).dim)
        combos[tuple(dims)] += 1
    return combos


class TestIntersect:
    def test_line_from_two_planes(self, two_planes):
        R = intersect(two_planes)
        Y = R.complex
        assert R.proper and is_proper(R) and Y.dim == 1
        assert len(Y.cells_of_dim(0)) == 2
        assert sum(1 for c in Y.cells if c.rays) == 4
        assert sum(1 for c in Y.cells if c.dim == 1 and not c.rays) == 1

    def test_self_intersection_not_proper(self, two_planes):
        R = intersect([two_planes[0], two_planes[0]])
        assert not R.proper and R.complex.dim == 2

    def test_product_curve_is_four_lines(self, product_pair):
        _, R = product_pair
        rays = Counter(c.rays[0] for c in R.complex.cells if c.rays)
        assert rays == {(1, 0, 0): 4, (0, 1, 0): 4, (0, 0, 1): 4, (-1, -1, -1): 4}

    def test_parallel_translates_vacuous(self):
        R = intersect([vp({(1, 0): 0, (0, 0): 0}), vp({(1, 0): 1, (0, 0): 0})])
        assert R.complex.is_empty and R.vacuous and is_proper(R)

    def test_decomposition_is_product_cell(self, two_planes, product_pair):
        E, R56 = product_pair
        for polys, R in ((two_planes, intersect(two_planes)), ([E["f1"], E["f2"]], R56)):
            prod = tropical_product(*polys)
            sub = prod.subdivision()
            cells = {sub.cell_polytope(fc) for fc in sub.faces}
            for i in range(len(R.complex.cells)):
                assert R.dual_cell(i) in cells

    def test_matches_argmin_brute_force(self, two_planes):
        """Cells found by intersecting agree with a pointwise double-minimum test."""
        R = intersect(two_planes)
        rng = random.Random(5)
        for _ in range(300):
            x = tuple(F(rng.randint(-16, 16), rng.randint(1, 4)) for _ in range(3))
            on = all(f.on_hypersurface(x) for f in two_planes)
            assert R.complex.contains(x) == on


class TestTransversal:
    def test_two_planes(self, two_planes):
        R = intersect(two_planes)
        cert = is_transversal(R)
        assert cert.transversal and cert.exhaustive
        for i in R.complex.cells_of_dim(0):
            assert sorted(R.summand_dims(i)) == [1, 2] and R.dual_cell(i).dim == 3

    def test_vertex_on_vertex(self):
        # two plane curves whose only common point is a vertex of both
        f1 = vp({(1, 0): 0, (0, 1): 0, (0, 0): 0})
        f2 = vp({(2, 1): 0, (1, 3): 0, (0, 0): 0})
        R = intersect([f1, f2])
        assert R.proper and R.complex.vertices == ((0, 0),)
        assert not is_transversal(R).transversal

    def test_single_factor(self, two_planes):
        assert is_transversal(intersect(two_planes[:1])).transversal

    def test_not_proper_raises(self, two_planes):
        with pytest.raises(NotProper):
            is_transversal(intersect([two_planes[0], two_planes[0]]))


class TestMixedCells:
    def test_two_planes(self, two_planes):
        mc = mixed_cells(two_planes)
        assert len(mc) == 2
        tri = convex_hull([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
        seg = convex_hull([(0, 0, 0), (0, 1, 0)])
        assert minkowski_sum(tri, seg) in {m.polytope for m in mc}
        for m in mc:
            dims = sorted(convex_hull(f.support[j] for j in s).dim for f, s in zip(two_planes, m.summands))
            assert dims == [1, 2]

    def test_generic_plane_pairs_count_vertices(self):
        rng = random.Random(11)
        for _ in range(8):
            fs = [plane(*(F(rng.randint(0, 40), 7) for _ in range(4))) for _ in range(2)]
            R = intersect(fs)
            if not R.proper or not is_transversal(R).transversal:
                continue
            assert len(mixed_cells(fs)) == len(R.complex.cells_of_dim(0))

    def test_plane_curves_count_points(self):
        rng = random.Random(12)
        for _ in range(8):
            fs = [vp({(1, 0): rng.randint(0, 9), (0, 1): rng.randint(0, 9), (0, 0): rng.randint(0, 9),
                      (1, 1): rng.randint(0, 9)}) for _ in range(2)]
            R = intersect(fs)
            if R.complex.is_empty or not R.proper or not is_transversal(R).transversal:
                continue
            assert len(mixed_cells(fs)) == len(R.complex.cells_of_dim(0))

    def test_product_pair_against_qhull(self, product_pair):
        E, _ = product_pair
        polys = [E["f1"], E["f2"]]
        combos = qhull_mixed_cells(polys)
        # frozen from the qhull oracle: 20 lower facets
        assert combos == {(3, 0): 4, (1, 2): 6, (2, 1): 6, (0, 3): 4}
        mc = mixed_cells(polys)
        assert len(mc) == combos[(1, 2)] + combos[(2, 1)] == 12


class TestBalancing:
    def test_two_planes_balanced(self, two_planes):
        assert balancing_defects(intersect(two_planes)) == {}

    def test_product_curve_balanced(self, product_pair):
        _, R = product_pair
        assert balancing_defects(R) == {}


@pytest.mark.parametrize("n", [3, 4, 5])
def test_caterpillar_system_is_the_line(n):
    line, forms = caterpillar(n)
    L = line.complex()
    Y = intersect(forms).complex
    rng = random.Random(n)
    for _ in range(100):
        c = rng.choice([c for c in L.cells if c.dim == 1])
        t = F(rng.randint(1, 40), 8)
        o = L.vertices[c.vertex_ids[0]]
        if c.rays:
            x = tuple(a + t * b for a, b in zip(o, c.rays[0]))
        else:
            e = L.vertices[c.vertex_ids[1]]
            s = t / 5 if t < 5 else F(1, 2)
            x = tuple(a + s * (b - a) for a, b in zip(o, e))
        assert Y.contains(x)
    for i in Y.cells_of_dim(1):
        x = Y.relative_interior_point(i)
        assert L.contains(x)


class TestNewtonDegeneracy:
    def test_shared_edge_root(self):
        # both restrict to multiples of (x - y) on the edge between x and y
        f1 = tropicalize({(1, 0): 1, (0, 1): -1, (0, 0): 3}, 2)
        f2 = tropicalize({(1, 0): 2, (0, 1): -2, (0, 0): 5}, 2)
        assert newton_degeneracy([f1, f2]) == "degenerate"

    def test_generic_pair_unknown(self):
        f1 = tropicalize({(1, 0): 1, (0, 1): 2, (0, 0): 3}, 2)
        f2 = tropicalize({(1, 0): 5, (0, 1): 7, (0, 0): 1}, 2)
        assert newton_degeneracy([f1, f2]) == "unknown"

    def test_valuations_only_unknown(self):
        assert newton_degeneracy([vp({(1, 0): 0, (0, 0): 0}), vp({(1, 0): 0, (0, 0): 1})]) == "unknown"

