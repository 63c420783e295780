"""Chiplet arrangement toolkit.

Generates grid, brickwall, and hexamesh chiplet arrangements on a package
substrate, derives their adjacency graphs and network metrics, solves the
chiplet shaping and inter-chiplet link bandwidth models, and simulates the
resulting interconnect at cycle level to compare zero-load latency and
saturation throughput across arrangements.
"""

from .arrangement import (
    CONTACT_EPS_MM,
    AdjacencyGraph,
    Arrangement,
    ArrangementKind,
    ChipletPlacement,
    Regularity,
    adjacency_from_placements,
    build_arrangement,
    regularity_of,
)
from .errors import (
    ChipletNetError,
    DisconnectedGraphError,
    LinkInfeasibleError,
    NoLinkAreaError,
    NotRegularError,
    OverlappingPlacementsError,
    SaturatedError,
    TooLargeForExactError,
)
from .geometry import (
    ShapeSolution,
    chiplet_area,
    shape_for,
    shape_residuals,
    solve_shape_brick,
    solve_shape_grid,
)
from .linkmodel import (
    MAX_LINK_REACH_MM,
    LinkBudget,
    LinkParams,
    estimate_link_span,
    full_global_bandwidth,
    link_bandwidth,
    link_reach_warning,
)
from .metrics import (
    EXACT_BISECTION_LIMIT,
    DegreeStats,
    MetricsReport,
    asymptotic_ratios,
    bfs_diameter,
    closed_form_bisection,
    closed_form_diameter,
    degree_stats,
    exhaustive_bisection,
    formula_bisection,
    formula_diameter,
    heuristic_bisection,
    metrics_report,
)
from .simnet import (
    RoutingTables,
    SaturationResult,
    SimConfig,
    SimResult,
    analytic_zero_load,
    compute_routes,
    find_saturation,
    mean_endpoint_hops,
    run,
    throughput_tbps,
)
from .sweep import (
    CSV_COLUMNS,
    SweepSpec,
    compare_rows,
    read_sweep_csv,
    run_sweep,
    sweep_point,
    write_compare_csv,
    write_sweep_csv,
)

__version__ = "0.1.0"

__all__ = [
    "CONTACT_EPS_MM",
    "CSV_COLUMNS",
    "EXACT_BISECTION_LIMIT",
    "MAX_LINK_REACH_MM",
    "AdjacencyGraph",
    "Arrangement",
    "ArrangementKind",
    "ChipletNetError",
    "ChipletPlacement",
    "DegreeStats",
    "DisconnectedGraphError",
    "LinkBudget",
    "LinkInfeasibleError",
    "LinkParams",
    "MetricsReport",
    "NoLinkAreaError",
    "NotRegularError",
    "OverlappingPlacementsError",
    "Regularity",
    "RoutingTables",
    "SaturatedError",
    "SaturationResult",
    "ShapeSolution",
    "SimConfig",
    "SimResult",
    "SweepSpec",
    "TooLargeForExactError",
    "adjacency_from_placements",
    "analytic_zero_load",
    "asymptotic_ratios",
    "bfs_diameter",
    "build_arrangement",
    "chiplet_area",
    "closed_form_bisection",
    "closed_form_diameter",
    "compare_rows",
    "compute_routes",
    "degree_stats",
    "estimate_link_span",
    "exhaustive_bisection",
    "find_saturation",
    "formula_bisection",
    "formula_diameter",
    "full_global_bandwidth",
    "heuristic_bisection",
    "link_bandwidth",
    "link_reach_warning",
    "mean_endpoint_hops",
    "metrics_report",
    "read_sweep_csv",
    "regularity_of",
    "run",
    "run_sweep",
    "shape_for",
    "shape_residuals",
    "solve_shape_brick",
    "solve_shape_grid",
    "sweep_point",
    "throughput_tbps",
    "write_compare_csv",
    "write_sweep_csv",
]
