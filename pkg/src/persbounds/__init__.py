"""Persistent homology with metric-geometry bounds.

Computes Vietoris-Rips and Cech persistence of point clouds and finite
metric spaces, estimates width/spread/deficiency invariants, and checks
the corresponding lifespan and extinction inequalities.
"""

from persbounds.metric import (
    Ball,
    FiniteMetricSpace,
    PointCloud,
    circumradius,
    diameter,
    hausdorff_distance,
    kuratowski_embed,
    min_enclosing_ball,
    pairwise_distances,
    radius,
)
from persbounds.complexes import FilteredComplex, Simplex, cech, validate_interleaving, vietoris_rips
from persbounds.persistence import (
    PersistenceDiagram,
    bottleneck_distance,
    brute_force_persistence,
    compute_persistence,
    extinction_time,
    lifespans,
)

from persbounds.widths import (
    AffineFlat,
    SimplicialCore,
    WidthEstimate,
    core_displacement,
    kolmogorov_width,
    mst_core,
    spread,
    uberspread_upper,
)
from persbounds.convex_geometry import (
    convexity_deficiency,
    hull_core_2d,
    medial_axis_core,
)
from persbounds import datasets
from persbounds.tightspan import hyperconvexity_deficiency, tight_span_membership
from persbounds.bounds import (
    BoundCheck,
    ExperimentReport,
    VerifyConfig,
    run_suite,
    verify_bounds,
)

__all__ = [
    "AffineFlat",
    "BoundCheck",
    "ExperimentReport",
    "SimplicialCore",
    "VerifyConfig",
    "WidthEstimate",
    "convexity_deficiency",
    "core_displacement",
    "hull_core_2d",
    "hyperconvexity_deficiency",
    "kolmogorov_width",
    "medial_axis_core",
    "mst_core",
    "run_suite",
    "spread",
    "tight_span_membership",
    "uberspread_upper",
    "verify_bounds",
    "Ball",
    "FiniteMetricSpace",
    "FilteredComplex",
    "PersistenceDiagram",
    "PointCloud",
    "Simplex",
    "bottleneck_distance",
    "brute_force_persistence",
    "cech",
    "circumradius",
    "compute_persistence",
    "diameter",
    "extinction_time",
    "hausdorff_distance",
    "kuratowski_embed",
    "lifespans",
    "min_enclosing_ball",
    "pairwise_distances",
    "radius",
    "validate_interleaving",
    "vietoris_rips",
]

__version__ = "0.1.0"
