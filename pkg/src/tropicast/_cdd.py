"""Thin exact-arithmetic bridge to cddlib (double description + LP).

Constraints use the convention ``a . x <= b`` for inequalities and
``a . x == b`` for equalities; all numbers are Fractions.
"""

from fractions import Fraction

import cdd

from ._linalg import q


def _matrix(rows, linear=()):
    m = cdd.Matrix([[q(x) for x in r] for r in rows], number_type="fraction")
    if linear:
        m.lin_set = frozenset(linear)
    return m


def hrep(points, rays=(), lines=()):
    """Facet inequalities and equalities of ``conv(points) + cone(rays) + span(lines)``."""
    rows = [[1, *p] for p in points] + [[0, *r] for r in rays] + [[0, *l] for l in lines]
    lin = range(len(points) + len(rays), len(rows))
    m = _matrix(rows, lin)
    m.rep_type = cdd.RepType.GENERATOR
    h = cdd.Polyhedron(m).get_inequalities()
    eqs, ineqs = [], []
    for i in range(h.row_size):
        row = [Fraction(x) for x in h[i]]
        b, a = row[0], tuple(-x for x in row[1:])
        if i in h.lin_set:
            eqs.append((a, b))
        elif any(a):
            ineqs.append((a, b))
    return eqs, ineqs


def _constraint_rows(eqs, ineqs):
    rows = [[b, *(-x for x in a)] for a, b in eqs]
    rows += [[b, *(-x for x in a)] for a, b in ineqs]
    return rows, range(len(eqs))


def vrep(dim, eqs, ineqs):
    """Vertices, rays and lineality directions of an H-polyhedron; None if empty."""
    rows, lin = _constraint_rows(eqs, ineqs)
    if not rows:
        unit = [tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)]
        return [tuple(Fraction(0) for _ in range(dim))], [], unit
    m = _matrix(rows, lin)
    m.rep_type = cdd.RepType.INEQUALITY
    g = cdd.Polyhedron(m).get_generators()
    verts, rays, lines = [], [], []
    for i in range(g.row_size):
        row = [Fraction(x) for x in g[i]]
        if i in g.lin_set:
            lines.append(tuple(row[1:]))
        elif row[0] == 0:
            rays.append(tuple(row[1:]))
        else:
            verts.append(tuple(x / row[0] for x in row[1:]))
    if g.row_size == 0:
        return None
    if not verts:
        # cdd leaves out the apex of a homogeneous cone
        verts.append(tuple(Fraction(0) for _ in range(dim)))
    return verts, rays, lines


def feasible(dim, eqs, ineqs) -> bool:
    """Exact LP feasibility of a constraint system."""
    rows, lin = _constraint_rows(eqs, ineqs)
    if not rows:
        return True
    m = _matrix(rows, lin)
    m.rep_type = cdd.RepType.INEQUALITY
    m.obj_type = cdd.LPObjType.MAX
    m.obj_func = tuple([0] * (dim + 1))
    lp = cdd.LinProg(m)
    lp.solve()
    return lp.status == cdd.LPStatusType.OPTIMAL
