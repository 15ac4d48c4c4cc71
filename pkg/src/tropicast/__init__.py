"""Exact tropical curves, rational projections, self-intersections and mixed fiber polytopes."""

from .arrangement import (
    IntersectionReport,
    intersect,
    is_proper,
    is_transversal,
    mixed_cells,
    newton_degeneracy,
)
from .exactgeom import (
    Polytope,
    RegularSubdivision,
    convex_hull,
    face_in_direction,
    lower_hull_subdivision,
    minkowski_difference,
    minkowski_sum,
)
from .fiber import (
    LinearFunctional,
    face_of_fiber_polytope,
    fiber_polytope,
    mixed_fiber_polytope,
    patchwork_offset,
)
from .lines import (
    TropicalLine,
    caterpillar,
    check_caterpillar_bound,
    count_line_types,
    enumerate_line_types,
    lower_bound_projection,
    node_count,
    sip_count,
)
from .project import (
    PlaneCurveImage,
    RationalProjection,
    image_dual_subdivision,
    kernel_basis,
    lift_polynomial,
    monomial_pushforward,
    node_points,
    project_curve,
    self_intersections,
)
from .svg import emit_svg
from .tropoly import (
    TropicalComplex,
    ValuedPolynomial,
    hypersurface,
    local_cone,
    padic_valuation,
    tropicalize,
)

__version__ = "0.1.0"
