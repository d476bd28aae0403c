"""Geodesic projections and dimension-distortion experiments on
constant-curvature surfaces."""

from .geometry import (
    GeodesicAngle,
    ProjectionResult,
    SurfaceModel,
    SurfacePoint,
    distance,
    distance_values,
    oracle_projection,
    projection_values,
    right_triangle_adjacent,
    signed_projection,
)
from .transversality import (
    Decomposition,
    PairGeometry,
    TransversalityReport,
    analytic_constant_bounds,
    check_definition,
    decomposition,
    estimate_constants,
    pair_geometry,
    phi,
    phi_derivative,
    radial_transform,
    sample_domain_pairs,
    sample_domain_points,
)
from .fractal import (
    IFSSpec,
    PointCloud,
    cantor_spec,
    corner_dust_spec,
    fit_scale,
    generate_attractor,
    push_to_surface,
    similarity_dimension,
    write_cloud_csv,
)
from .dimension import (
    DimensionEstimate,
    MeasureEstimate,
    auto_epsilons,
    box_count_1d,
    measure_estimate_1d,
    occupied_boxes,
    project_cloud,
    write_counts_csv,
)
from .sphere import (
    AmbientPoint,
    AngleSet,
    MultiProjection,
    SINGLETON,
    WHOLE_LINE,
    ambient_from_polar,
    degenerate_point,
    direction_vector,
    exceptional_sets,
    multivalued_project,
    polar_circle_arc,
    polar_from_ambient,
    psi,
    psi_values,
    tangent_frame,
    write_intervals_csv,
    write_scan_csv,
)
from .cli import SweepConfig, SweepRow, run_sweep, theta_grid

__version__ = "0.1.0"
