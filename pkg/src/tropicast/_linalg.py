"""Small exact linear algebra over the rationals (row reduction and friends)."""

from fractions import Fraction
from math import gcd
from typing import Sequence

Vec = tuple[Fraction, ...]


def q(x) -> Fraction:
    """Coerce an int, Fraction or ``"a/b"`` string to a Fraction.

    Floats are refused: every coordinate in this package is exact.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if hasattr(x, "numerator") and hasattr(x, "denominator") and not isinstance(x, float):
        return Fraction(int(x.numerator), int(x.denominator))
    raise TypeError(f"cannot use {type(x).__name__} {x!r} as an exact rational")


def vec(xs) -> Vec:
    return tuple(q(x) for x in xs)


def dot(a, b) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def sub(a, b) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def add(a, b) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def scale(c, a) -> Vec:
    return tuple(c * x for x in a)


def rref(rows: Sequence[Sequence[Fraction]], ncols: int | None = None):
    """Reduced row echelon form.  Returns ``(rows, pivot_columns)``."""
    m = [[q(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(rows, ncols: int) -> list[Vec]:
    """Basis of ``{x : rows @ x = 0}``, one vector per free column."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    red, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in zip(red, piv):
            v[p] = -r[f]
        basis.append(tuple(v))
    return basis


def solve(rows, rhs) -> Vec | None:
    """One solution of ``rows @ x = rhs`` or None when inconsistent."""
    n = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, piv = rref(aug, n + 1)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for r, p in zip(red, piv):
        x[p] = r[n]
    return tuple(x)


def det(rows) -> Fraction:
    m = [[q(x) for x in r] for r in rows]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


def affine_hull(points):
    """``(base, direction_basis, pivot_columns)`` of the affine span of points.

    Projecting onto the pivot columns is injective on the span, which gives
    full-dimensional coordinates for hull computations.
    """
    base = points[0]
    diffs = [sub(p, base) for p in points[1:]]
    diffs = [d for d in diffs if any(d)]
    if not diffs:
        return base, [], []
    red, piv = rref(diffs, len(base))
    return base, [tuple(r) for r in red], piv


def primitive(v) -> tuple[int, ...]:
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    v = vec(v)
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in ints)


def lattice_length(a, b) -> Fraction:
    """Lattice length of the segment [a, b] (gcd of the coordinate differences)."""
    d = sub(vec(b), vec(a))
    den = 1
    for x in d:
        den = den * x.denominator // gcd(den, x.denominator)
    g = 0
    for x in d:
        g = gcd(g, abs(int(x * den)))
    return Fraction(g, den)
