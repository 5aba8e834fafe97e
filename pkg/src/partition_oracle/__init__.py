"""Partition oracle for bounded-degree minor-closed graph families.

Local clustering by truncated diffusion, a phase-coordinated size-threshold
search, consistent per-vertex piece queries, and the applications they
enable (property testing, additive estimation), plus an analysis harness
for structural measurements.
"""
from .analysis import (
    CensusReport,
    CutReport,
    DifferentialReport,
    differential_check,
    good_seed_census,
    leaky_census,
    measure_cut,
    viability_census,
)
from .applications import (
    DECIDERS,
    SCORERS,
    EstimatorConfig,
    TesterConfig,
    estimate_additive,
    estimate_cut_fraction,
    run_estimator,
    run_tester,
    test_property,
)
from .diffusion import (
    LSCurve,
    conductance,
    cut_size,
    exact_number,
    lazy_step,
    level_set,
    ls_check_chord,
    ls_curve,
    ranked_vertices,
    truncate,
    truncated_diffusion,
)
from .graphs import (
    BoundedDegreeGraph,
    GraphFormatError,
    VertexSet,
    connected_components,
    gen_grid,
    gen_random_tree,
    gen_triangulated_grid,
    induced_edges,
    load_graph,
    save_graph,
)
from .oracle import (
    OracleConfigError,
    Partition,
    PartitionOracle,
    PhaseThresholds,
    cluster,
    find_anchor,
    find_ib,
    find_partition,
    findr,
    global_partition,
    is_free,
)
from .params import OracleParams, ParamError, derive_params, params_to_dict
from .seeds import SeedContext, geometric_from_uniform, phase_of, precedes, walk_len_of
from .solvers import (
    DEFAULT_SOLVER_CAP,
    SolverCapError,
    contains_subgraph,
    is_bipartite,
    is_triangle_free,
    maximum_independent_set,
    maximum_matching,
    minimum_dominating_set,
    minimum_vertex_cover,
    two_coloring,
)

__version__ = "0.1.0"

__all__ = [
    "BoundedDegreeGraph",
    "CensusReport",
    "CutReport",
    "DECIDERS",
    "DEFAULT_SOLVER_CAP",
    "DifferentialReport",
    "EstimatorConfig",
    "GraphFormatError",
    "LSCurve",
    "OracleConfigError",
    "OracleParams",
    "ParamError",
    "Partition",
    "PartitionOracle",
    "PhaseThresholds",
    "SCORERS",
    "SeedContext",
    "SolverCapError",
    "TesterConfig",
    "VertexSet",
    "cluster",
    "conductance",
    "connected_components",
    "contains_subgraph",
    "cut_size",
    "derive_params",
    "differential_check",
    "estimate_additive",
    "estimate_cut_fraction",
    "exact_number",
    "find_anchor",
    "find_ib",
    "find_partition",
    "findr",
    "gen_grid",
    "gen_random_tree",
    "gen_triangulated_grid",
    "geometric_from_uniform",
    "global_partition",
    "good_seed_census",
    "induced_edges",
    "is_bipartite",
    "is_free",
    "is_triangle_free",
    "lazy_step",
    "leaky_census",
    "level_set",
    "load_graph",
    "ls_check_chord",
    "ls_curve",
    "maximum_independent_set",
    "maximum_matching",
    "measure_cut",
    "minimum_dominating_set",
    "minimum_vertex_cover",
    "params_to_dict",
    "phase_of",
    "precedes",
    "ranked_vertices",
    "run_estimator",
    "run_tester",
    "save_graph",
    "test_property",
    "truncate",
    "truncated_diffusion",
    "two_coloring",
    "viability_census",
    "walk_len_of",
]
