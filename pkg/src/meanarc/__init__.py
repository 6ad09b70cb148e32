"""Mean arc lengths of closed trajectories dropped uniformly onto planar
domains.

The package samples rigid placements of one simple polygon (the trajectory)
relative to another (the domain) under the translation-angle measure, clips
the trajectory boundary against the domain, and estimates placement-measure
integrals together with their closed-form values. On top of that sit scale
sweeps, a verified critical-scale search, and an embeddability test, all
driven by the ``meanarc`` command-line tool.
"""

from ._version import __version__
from .arcs import Arc, ArcReport, Classification, classify_containment, clip_boundary
from .estimators import (
    BoundsInvalid,
    CriticalScaleResult,
    EmbeddabilityReport,
    MeanArcEstimate,
    MeasureEstimate,
    MeasureSet,
    NoIntersections,
    SweepResult,
    SweepRow,
    PairRun,
    estimate_mean_arc,
    estimate_measures,
    find_critical_scale,
    mean_arc_from_run,
    measures_from_run,
    run_pair,
    sweep_scale,
    test_embeddability,
    z_score,
)
from .formulas import (
    NegativeResult,
    ShapeSummary,
    blaschke_arc_measure,
    cauchy_mean,
    containment_measure,
    mazzolo_mean,
    poincare_crossing_measure,
    santalo_total_measure,
    small_trajectory_mean,
)
from .geometry import (
    ContactKind,
    DegenerateInput,
    Location,
    RigidMotion,
    SegmentContact,
    SimplePolygon,
    Tolerance,
    ValidationError,
    apply_motion,
    circumradius_about,
    convex_hull,
    locate_points,
    point_in_polygon,
    segment_intersection,
    signed_distances,
)
from .sampling import (
    DegenerateFlood,
    PlacementSample,
    SamplingWindow,
    build_window,
    motion_arrays,
    resample_policy,
    sample_motions,
    sample_placements,
)
from .shapes import (
    InvalidScale,
    InvalidSpec,
    ParseError,
    ShapeSpec,
    build,
    centered_on_centroid,
    load_shape,
    parse_spec,
    save_shape,
    scale,
)

__all__ = [
    "__version__",
    "Arc",
    "ArcReport",
    "Classification",
    "classify_containment",
    "clip_boundary",
    "BoundsInvalid",
    "CriticalScaleResult",
    "EmbeddabilityReport",
    "MeanArcEstimate",
    "MeasureEstimate",
    "MeasureSet",
    "NoIntersections",
    "SweepResult",
    "SweepRow",
    "PairRun",
    "estimate_mean_arc",
    "estimate_measures",
    "find_critical_scale",
    "mean_arc_from_run",
    "measures_from_run",
    "run_pair",
    "sweep_scale",
    "test_embeddability",
    "z_score",
    "NegativeResult",
    "ShapeSummary",
    "blaschke_arc_measure",
    "cauchy_mean",
    "containment_measure",
    "mazzolo_mean",
    "poincare_crossing_measure",
    "santalo_total_measure",
    "small_trajectory_mean",
    "ContactKind",
    "DegenerateInput",
    "Location",
    "RigidMotion",
    "SegmentContact",
    "SimplePolygon",
    "Tolerance",
    "ValidationError",
    "apply_motion",
    "circumradius_about",
    "convex_hull",
    "locate_points",
    "point_in_polygon",
    "segment_intersection",
    "signed_distances",
    "DegenerateFlood",
    "PlacementSample",
    "SamplingWindow",
    "build_window",
    "motion_arrays",
    "resample_policy",
    "sample_motions",
    "sample_placements",
    "InvalidScale",
    "InvalidSpec",
    "ParseError",
    "ShapeSpec",
    "build",
    "centered_on_centroid",
    "load_shape",
    "parse_spec",
    "save_shape",
    "scale",
]
