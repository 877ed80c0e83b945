"""Plane-subgraph decompositions of complete geometric graphs on dense
point sets, with exact integer geometry and an independent verifier."""

from .decompose import (
    DEFAULT_C_PRIME,
    DEFAULT_K_MAX,
    MODE_FALLBACK,
    MODE_WITNESS,
    Decomposition,
    PlaneSubgraph,
    caratheodory_lower_bound,
    decompose,
    decompose_fallback,
    decompose_random_mode,
    decompose_special,
    dumps_decomposition,
    load_decomposition,
    loads_decomposition,
    save_decomposition,
    theoretical_k,
)
from .errors import (
    CertificationError,
    DecompositionInfeasible,
    FormatError,
    GeneralPositionError,
    GenerationError,
    InputDomainError,
    SizeLimitError,
)
from .geometry import (
    Orientation,
    Point,
    Segment,
    convex_hull,
    orientation,
    point_in_convex_polygon,
    point_in_triangle_strict,
    segment_intersects_open_box,
    segments_cross,
    squared_distance_extremes,
)
from .grid import (
    Cell,
    DegenerateHullError,
    FourCellWitness,
    GridConfig,
    StarTriangulation,
    assign_cells,
    bounding_square,
    build_grid,
    build_star_triangulation,
    cells_crossed,
    cluster_size,
    containment_predicate,
    find_four_cell_witness,
    instance_threshold,
    rich_cells,
)
from .pointsets import (
    ALPHA_LOWER_LIMIT,
    DEFAULT_SCALE,
    DensityStats,
    PointSet,
    density_stats,
    dumps_points,
    gen_perturbed_grid,
    gen_reflection_lowerbound,
    gen_uniform_unit_square,
    is_alpha_dense,
    load_points,
    loads_points,
    reflection_matching,
    save_points,
)
from .render import render_scene
from .verify import (
    CrossingFamily,
    VerificationReport,
    check_crossing_family,
    count_4tuples,
    is_plane,
    lemma_bounds_report,
    max_crossing_family_exact,
    verify_partition,
)

__version__ = "0.1.0"

__all__ = [
    "ALPHA_LOWER_LIMIT",
    "Cell",
    "CertificationError",
    "CrossingFamily",
    "DEFAULT_C_PRIME",
    "DEFAULT_K_MAX",
    "DEFAULT_SCALE",
    "Decomposition",
    "DecompositionInfeasible",
    "DegenerateHullError",
    "DensityStats",
    "FormatError",
    "FourCellWitness",
    "GeneralPositionError",
    "GenerationError",
    "GridConfig",
    "InputDomainError",
    "MODE_FALLBACK",
    "MODE_WITNESS",
    "Orientation",
    "PlaneSubgraph",
    "Point",
    "PointSet",
    "Segment",
    "SizeLimitError",
    "StarTriangulation",
    "VerificationReport",
    "assign_cells",
    "bounding_square",
    "build_grid",
    "build_star_triangulation",
    "caratheodory_lower_bound",
    "cells_crossed",
    "check_crossing_family",
    "cluster_size",
    "containment_predicate",
    "convex_hull",
    "count_4tuples",
    "decompose",
    "decompose_fallback",
    "decompose_random_mode",
    "decompose_special",
    "density_stats",
    "dumps_decomposition",
    "dumps_points",
    "find_four_cell_witness",
    "gen_perturbed_grid",
    "gen_reflection_lowerbound",
    "gen_uniform_unit_square",
    "instance_threshold",
    "is_alpha_dense",
    "is_plane",
    "lemma_bounds_report",
    "load_decomposition",
    "load_points",
    "loads_decomposition",
    "loads_points",
    "max_crossing_family_exact",
    "orientation",
    "point_in_convex_polygon",
    "point_in_triangle_strict",
    "reflection_matching",
    "render_scene",
    "save_decomposition",
    "save_points",
    "segment_intersects_open_box",
    "segments_cross",
    "squared_distance_extremes",
    "theoretical_k",
    "verify_partition",
]
