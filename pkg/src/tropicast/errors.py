"""Exception hierarchy.

Errors deriving from :class:`GeometricDegeneracy` signal inputs that are
valid but non-generic (ties, overlaps, collapsed edges).  The CLI maps them to
exit status 2; everything else is a usage error.
"""


class TropicastError(Exception):
    pass


class GeometricDegeneracy(TropicastError):
    pass


class EmptyInput(TropicastError, ValueError):
    pass


class DimMismatch(TropicastError, ValueError):
    pass


class ZeroDirection(TropicastError, ValueError):
    pass


class NotAPolytope(GeometricDegeneracy):
    """A Minkowski difference that is only a virtual polytope."""


class NotPrime(TropicastError, ValueError):
    pass


class ZeroPolynomial(TropicastError, ValueError):
    pass


class EmptyHypersurface(TropicastError, ValueError):
    pass


class PointNotOnComplex(TropicastError, ValueError):
    pass


class NotProper(GeometricDegeneracy):
    pass


class TieError(GeometricDegeneracy):
    pass


class EmptySlice(TropicastError, ValueError):
    pass


class MixedFiberNotCertified(GeometricDegeneracy):
    pass


class NotAFacet(GeometricDegeneracy):
    pass


class RankError(TropicastError, ValueError):
    pass


class DegenerateProjection(GeometricDegeneracy):
    pass


class OverlapDegenerate(GeometricDegeneracy):
    pass


class NotACaterpillar(TropicastError, ValueError):
    pass


class ConstructionFailed(TropicastError):
    pass


class NotPlanar(TropicastError, ValueError):
    pass
