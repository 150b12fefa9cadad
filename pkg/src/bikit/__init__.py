"""Broadcast and reach improvement on information graphs by edge addition."""
from .graph import (
    AlphaRangeError,
    ConnectivityError,
    DuplicateEdgeError,
    GraphError,
    GraphFamilySpec,
    GraphParseError,
    InformationGraph,
    add_edges,
    edge_addition,
    format_graph,
    generate,
    load_graph,
    parse_graph,
    save_graph,
)
from .proximity import (
    EXACT,
    MONTE_CARLO,
    EstimatorConfig,
    ExactLimitError,
    ProximityEstimate,
    ProximityMatrix,
    broadcast_value,
    exact_proximity,
    implied_metric,
    mc_proximity,
    neighborhood,
    proximity_matrix,
    reach_value,
)
from .centers import gonzalez_centers, star_edges
from .results import AugmentationResult, broadcast_guarantee, reach_guarantee
from .kcenter import improve_bicriteria, improve_single_criteria
from .witness import improve_witness
from .submod import improve_submod
from .dispatch import improve_broadcast
from .reach import improve_reach, improve_reach_ball, improve_reach_witness, reach_via_broadcast
from .oracle import brute_force_broadcast_opt, brute_force_kcenter, brute_force_reach_opt

__version__ = "0.1.0"
