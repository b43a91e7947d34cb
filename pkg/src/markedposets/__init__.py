"""Marked poset polytopes: exact geometry, 2-levelness criteria, Ehrhart polynomials."""

from .errors import (
    DimensionTooLarge,
    EmptyPolytope,
    ExtensionExplosion,
    InfeasibleMarking,
    MarkedPosetError,
    NonIntegralVertices,
    PointOutsidePolytope,
    PreconditionViolated,
    UnboundedPolytope,
    VerificationFailed,
)
from .geometry import (
    HRepresentation,
    LinearInequality,
    UnivariatePolynomial,
    VRepresentation,
    affine_dimension,
    affine_image,
    contains,
    count_lattice_points,
    enumerate_vertices,
    evaluate_affine_values,
    interpolate_polynomial,
    irredundant,
    polynomial,
)
from .posets import (
    ChainOrderPartition,
    ExtensionWord,
    MarkedPoset,
    MarkingReport,
    Poset,
    augment_marked_order,
    canonical_labeling,
    hasse_components,
    induced_subposet,
    linear_extensions,
    maximal_marked_chains,
    restrict_marked,
    transitive_relation,
    validate_marked,
)
from .polytopes import (
    FacePartition,
    build_chain_hrep,
    build_chain_order_hrep,
    build_order_hrep,
    face_partition_of_point,
    is_face_partition,
    order_facets_combinatorial,
    order_vertices_combinatorial,
)
from .twolevel import (
    ChainTwoLevelResult,
    TwoLevelResult,
    chain_order_two_level_criterion,
    chain_two_level_criterion,
    is_two_level_direct,
    order_two_level_criterion,
)
from .ehrhart import (
    count_restricted_extensions,
    ehrhart_by_counting,
    ehrhart_formula_marked_order,
    pm_closed_form,
    pm_family,
    restricted_linear_extensions,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
