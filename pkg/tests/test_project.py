import dataclasses
import random
from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, settings, strategies as st

import oracles as O
from tropicast import jsonio as J
from tropicast.arrangement import intersect
from tropicast.errors import DegenerateProjection, OverlapDegenerate, RankError
from tropicast.exactgeom import convex_hull
from tropicast.lines import caterpillar, product_pair_system, lower_bound_projection
from tropicast.project import (
    RationalProjection,
    crossing_vertices,
    image_dual_subdivision,
    is_generic,
    kernel_basis,
    lift_polynomial,
    monomial_pushforward,
    node_points,
    project_curve,
    self_intersections,
    total_area_check,
)
from tropicast.tropoly import ValuedPolynomial, tropical_product

MONOMIAL_MAP = [[1, 2, 0], [0, 1, 1]]


def vp(d):
    return ValuedPolynomial.from_valuations(d)


def line_family(x, y):
    return [[x, 1, 0], [y, 0, 1]]


@pytest.fixture(scope="module")
def line3():
    return intersect(caterpillar(3)[1])


@pytest.fixture(scope="module")
def product_curve():
    E = product_pair_system()
    return intersect([E["f1"], E["f2"]]), E["A"]


class TestKernel:
    def test_monomial_map_kernel(self):
        assert kernel_basis(MONOMIAL_MAP) == [(2, -1, 1)]

    def test_identity_has_no_kernel(self):
        assert kernel_basis([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == []

    def test_projection_family(self):
        # solved by hand: -2a + b = 0, a + c = 0
        assert kernel_basis([[-2, 1, 0], [1, 0, 1]]) == [(1, 2, -1)]

    def test_rank_deficient(self):
        with pytest.raises(RankError):
            kernel_basis([[1, 2, 3], [2, 4, 6]])

    def test_float_rejected(self):
        with pytest.raises(ValueError):
            kernel_basis([[1.0, 2, 0], [0, 1, 1]])

    @given(st.lists(st.lists(st.integers(-4, 4), min_size=4, max_size=4), min_size=1, max_size=3))
    def test_annihilated_and_primitive(self, rows):
        if sympy.Matrix(rows).rank() != len(rows):
            with pytest.raises(RankError):
                kernel_basis(rows)
            return
        K = kernel_basis(rows)
        assert len(K) == 4 - len(rows)
        assert sympy.Matrix(K).rank() == len(K) if K else True
        for v in K:
            assert all(O.dot(r, v) == 0 for r in rows)
            assert sympy.igcd(*v) == 1


class TestLift:
    def test_linear_form(self, two_planes):
        f = lift_polynomial(two_planes[0], [(2, -1, 1)])
        got = {t.exp: t.val for t in f.terms}
        src = {t.exp: t.val for t in two_planes[0].terms}
        assert got == {(1, 0, 0, 2): src[(1, 0, 0)], (0, 1, 0, -1): src[(0, 1, 0)],
                       (0, 0, 1, 1): src[(0, 0, 1)], (0, 0, 0, 0): src[(0, 0, 0)]}

    @given(st.dictionaries(st.tuples(*[st.integers(0, 3)] * 3), st.integers(0, 5), min_size=1, max_size=7),
           st.tuples(*[st.integers(-3, 3)] * 3))
    def test_newton_polytope_maps(self, d, v):
        f = vp(d)
        g = lift_polynomial(f, [v])
        mapped = [p + (O.dot(v, p),) for p in f.newton_polytope().vertices]
        assert g.newton_polytope() == convex_hull(mapped)
        assert (0, 0, 0) not in d or (0, 0, 0, 0) in g.support


class TestPushforward:
    def test_eliminant(self, data_dir):
        g = J.poly_from_json(J.load(data_dir / "eliminant.json"))
        B = monomial_pushforward(g, MONOMIAL_MAP)
        assert {t.exp: t.val for t in B.terms} == {(1, 0): 1, (0, 2): 1, (3, 2): 0, (2, 4): 0, (6, 2): 0}
        assert {t.exp: t.coeff for t in B.terms} == {(1, 0): -338, (0, 2): -18, (3, 2): 483, (2, 4): 25, (6, 2): 343}
        assert not B.collision

    def test_identity(self, two_planes):
        f = two_planes[0]
        assert monomial_pushforward(f, [[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == f

    def test_collision(self):
        # (2,0,1) - (0,1,0) = (2,-1,1) spans the kernel, so both land on (2,1)
        f = vp({(2, 0, 1): 3, (0, 1, 0): 1, (1, 0, 0): 0})
        B = monomial_pushforward(f, MONOMIAL_MAP)
        assert B.collision
        assert {t.exp: t.val for t in B.terms} == {(2, 1): 1, (1, 0): 0}

    def test_commutes_with_valuation(self):
        coeffs = {(1, 0, 0): F(4), (0, 1, 1): F(-9, 2), (2, 0, 0): F(3)}
        from tropicast.tropoly import tropicalize
        left = monomial_pushforward(tropicalize(coeffs, 2), MONOMIAL_MAP)
        pushed = {tuple(O.dot(r, e) for r in MONOMIAL_MAP): c for e, c in coeffs.items()}
        assert {t.exp: t.val for t in left.terms} == {t.exp: t.val for t in tropicalize(pushed, 2).terms}


class TestProjectCurve:
    def test_line_pieces(self, line3):
        Y = line3.complex
        assert set(Y.vertices) == {(0, 0, 0), (-1, -1, 0)}
        img = project_curve(line3, [[-2, 1, 0], [1, 0, 1]])
        kinds = sorted(p.kind for p in img.pieces)
        assert kinds == ["edge", "ray", "ray", "ray", "ray"]
        A = img.projection
        assert set(img.vertex_images) == {A(v) for v in Y.vertices} == {(0, 0), (1, -1)}

    def test_coordinate_plane_is_congruent(self):
        R = intersect([vp({(1, 0, 0): 0, (0, 1, 0): 0, (0, 0, 0): 0}), vp({(0, 0, 1): 0, (0, 0, 0): 0})])
        img = project_curve(R, [[1, 0, 0], [0, 1, 0]])
        assert {p.direction for p in img.pieces} == {(1, 0), (0, 1), (-1, -1)}

    def test_ray_in_kernel(self, line3):
        with pytest.raises(DegenerateProjection):
            project_curve(line3, [[1, 0, 0], [0, 1, 0]])

    def test_overlap_is_reported(self):
        # e1 and e3 share an image direction and the vertex behind the e3 ray
        # lands on the image of the e1 ray, so the two rays overlap
        line, _ = caterpillar(5)
        A = [[1, -3, 1, 0, 1], [0, 0, 0, 1, 1]]
        img = project_curve(line.complex(), A)
        assert not is_generic(img)
        with pytest.raises(OverlapDegenerate):
            self_intersections(img)


class TestSelfIntersections:
    @pytest.mark.parametrize("x,y", [(-2, 1), (-3, 3)])
    def test_line_crossing(self, line3, x, y):
        sips = self_intersections(project_curve(line3, line_family(x, y)))
        assert len(sips) == 1 and sips[0].kinds == (("ray", "ray"),)
        Y = line3.complex
        rays = {Y.cells[f].rays[0] for f in sips[0].pairs[0]}
        assert rays == {(0, 1, 0), (0, 0, 1)}

    def test_no_crossing(self, line3):
        assert self_intersections(project_curve(line3, line_family(1, 1))) == []

    def test_grid_against_brute_force(self, line3):
        for x, y in O.grid(-3, 3, 2):
            try:
                img = project_curve(line3, line_family(x, y))
                got = {s.point for s in self_intersections(img)}
            except (DegenerateProjection, OverlapDegenerate):
                continue
            assert got == O.brute_sips(line3.complex, line_family(x, y))

    def test_points_sit_on_both_pieces(self, product_curve):
        R, A = product_curve
        img = project_curve(R, A)
        Y = R.complex

        def touches(found, face):
            return ("edge", face) in found or any(("vertex", v) in found for v in Y.cells[face].vertex_ids)

        for s in self_intersections(img):
            found = O.preimage_faces(Y, A, s.point)
            for f, g in s.pairs:
                assert touches(found, f) and touches(found, g)
                assert not set(Y.cells[f].vertex_ids) & set(Y.cells[g].vertex_ids)

    def test_product_curve_counts(self, product_curve):
        R, A = product_curve
        img = project_curve(R, A)
        strict = self_intersections(img)
        assert len(strict) == 24
        assert {s.point for s in strict} == O.brute_sips(R.complex, A)
        assert len(crossing_vertices(R)) == 4
        assert len(node_points(img)) == 28


def _transform(Y, U):
    """The complex U.Y, keeping only the data a projection reads."""
    M = sympy.Matrix(U)

    def m(v):
        return tuple(F(str(x)) for x in M * sympy.Matrix(v))

    cells = []
    for c in Y.cells:
        rays = tuple(tuple(int(x) for x in m(r)) for r in c.rays)
        cells.append(dataclasses.replace(c, rays=rays, eqs=(), ineqs=()))
    return dataclasses.replace(Y, vertices=tuple(m(v) for v in Y.vertices), cells=tuple(cells))


@st.composite
def unimodular(draw):
    U = sympy.eye(3)
    for _ in range(draw(st.integers(1, 5))):
        i, j = draw(st.sampled_from([(a, b) for a in range(3) for b in range(3) if a != b]))
        E = sympy.eye(3)
        E[i, j] = draw(st.sampled_from([-2, -1, 1, 2]))
        U = U * E
    return U


@settings(max_examples=25)
@given(unimodular(), st.integers(-3, 3), st.integers(-3, 3))
def test_unimodular_equivariance(U, x, y):
    Y = intersect(caterpillar(3)[1]).complex
    A = sympy.Matrix(line_family(x, y))
    B = (A * U.inv()).tolist()
    try:
        before = len(self_intersections(project_curve(Y, A.tolist())))
    except (DegenerateProjection, OverlapDegenerate):
        return
    after = len(self_intersections(project_curve(_transform(Y, U), [[int(v) for v in r] for r in B])))
    assert before == after


class TestDualSubdivision:
    def test_monomial_map_cells(self, two_planes, data_dir):
        bg = J.poly_from_json(J.load(data_dir / "pushforward.json"))
        R = intersect(two_planes)
        img, rep = image_dual_subdivision(R, MONOMIAL_MAP, bg)
        assert rep.coherent and rep.matches_pushforward
        cells = {c.point: c for c in img.dual_subdivision}
        quad = cells[(2, 1)]
        assert quad.p == 2
        assert set(quad.image.vertices) == {(0, 2), (1, 0), (2, 4), (3, 2)}
        assert cells[(0, 0)].p == cells[(1, 1)].p == 1
        assert {cells[(0, 0)].offset, cells[(1, 1)].offset} == {(1, 1), (-1, -1)}
        sub = bg.subdivision()
        target = {sub.cell_polytope(c) for c in sub.cells}
        assert {c.image for c in img.dual_subdivision} == target
        assert total_area_check(R, [c.image for c in img.dual_subdivision], MONOMIAL_MAP)

    def test_quadrangle_is_sum_of_two_mixed_fibers(self, two_planes):
        from tropicast.fiber import mixed_fiber_polytope
        R = intersect(two_planes)
        img, _ = image_dual_subdivision(R, MONOMIAL_MAP)
        quad = next(c for c in img.dual_subdivision if c.p == 2)
        parts = []
        for dual in quad.summands:
            polys = [convex_hull(f.support[j] for j in face) for f, face in zip(two_planes, dual)]
            parts.append(mixed_fiber_polytope(polys, (2, -1, 1)).polytope)
        from tropicast.exactgeom import minkowski_sum
        assert minkowski_sum(*parts) == quad.raw

    def test_injective_image_all_p_one(self, line3):
        img, rep = image_dual_subdivision(line3, line_family(1, 1))
        assert all(c.p == 1 for c in img.dual_subdivision) and rep.coherent

    @pytest.mark.parametrize("name", ["monomial_map", "product_pair", "line_family", "lb4", "lb5"])
    def test_sips_are_the_p2_cells(self, name, two_planes):
        if name == "monomial_map":
            R, A = intersect(two_planes), MONOMIAL_MAP
        elif name == "product_pair":
            E = product_pair_system()
            R, A = intersect([E["f1"], E["f2"]]), E["A"]
        elif name == "line_family":
            R, A = intersect(caterpillar(3)[1]), line_family(-2, 1)
        else:
            n = int(name[2:])
            R, A = intersect(caterpillar(n)[1]), lower_bound_projection(n).A
        img, _ = image_dual_subdivision(R, A)
        p2 = {c.point for c in img.dual_subdivision if c.p >= 2}
        assert p2 == {s.point for s in img.sips} == O.brute_sips(R.complex, A)


def test_projection_object():
    P = RationalProjection.of(MONOMIAL_MAP)
    assert P((1, 1, 1)) == (3, 2) and P.psi.coeffs == (2, -1, 1)
    with pytest.raises(ValueError):
        RationalProjection.of([[1, 0, 0, 0], [0, 1, 0, 0]]).psi
