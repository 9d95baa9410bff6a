"""Geometric structure of inverse polynomial images of [-1, 1].

Given a complex polynomial T of degree n, this package computes the
structure of the set T^{-1}([-1, 1]): its Pell decomposition
T^2 - 1 = H U^2, the minimal numbers of Jordan and analytic Jordan arcs,
endpoints and crossing points, connected components, and numerically
traced arcs with plot emission.  Every algebraic count is cross-validated
against a geometric brute-force oracle.
"""

from .errors import AmbiguityError, RootFindingError, TraceError
from .geometry import (
    AnalysisReport,
    CriticalPoint,
    bounding_box,
    component_count,
    critical_points,
    default_membership_tol,
    grid_oracle,
    is_in_image,
    is_real_image,
    trace_real_locus,
)
from .polynomial import (
    Poly,
    chebyshev_compose,
    chebyshev_first_kind,
    chebyshev_on_segment,
)
from .rootfinder import (
    RootCluster,
    cluster_roots,
    find_roots,
    root_bound,
    roots_with_multiplicity,
)
from .structure import (
    PellDecomposition,
    TwoArcClassification,
    analytic_arc_count,
    classify_two_arc,
    factor_root_clusters,
    jordan_arc_count,
    pell_decompose,
    pell_residual,
)
from .tracing import (
    Arc,
    CrossingPoint,
    ImageEndpoint,
    arc_component_count,
    image_endpoints,
    merge_analytic_arcs,
    trace_arcs,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguityError",
    "AnalysisReport",
    "Arc",
    "CriticalPoint",
    "CrossingPoint",
    "ImageEndpoint",
    "PellDecomposition",
    "Poly",
    "RootCluster",
    "RootFindingError",
    "TraceError",
    "TwoArcClassification",
    "analytic_arc_count",
    "arc_component_count",
    "bounding_box",
    "chebyshev_compose",
    "chebyshev_first_kind",
    "chebyshev_on_segment",
    "classify_two_arc",
    "cluster_roots",
    "component_count",
    "critical_points",
    "default_membership_tol",
    "factor_root_clusters",
    "find_roots",
    "grid_oracle",
    "image_endpoints",
    "is_in_image",
    "is_real_image",
    "jordan_arc_count",
    "merge_analytic_arcs",
    "pell_decompose",
    "pell_residual",
    "root_bound",
    "roots_with_multiplicity",
    "trace_arcs",
    "trace_real_locus",
]
