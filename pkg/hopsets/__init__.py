"""
hopsets: deterministic hop sets and approximate shortest paths

Hop sets from restricted clusters, overlay networks on a few centers, and
(1+ε)-approximate single-source distances, with cost accounting for the
CONGEST model, the congested clique and multi-pass edge streams.
"""

from .graph import (
    Graph,
    DistanceTable,
    HopDistanceTable,
    dijkstra_bounded,
    multi_source_dijkstra,
    bellman_ford_hops,
    round_weights,
    hop_diameter,
)
from .graphio import read_edge_list, write_edge_list, parse_generator
from .detection import DetectionList, detect_brute, detect_local, detect_rtz
from .ruling import RulingSetResult, ruling_set, check_ruling_set
from .clusters import (
    PriorityHierarchy,
    ClusterMap,
    greedy_hitting_set,
    compute_priorities,
    compute_clusters,
    list_size,
)
from .hopset import (
    HopSetEdges,
    AdditiveParams,
    hop_reduction_additive,
    hop_reduction,
    hop_set,
    approximate_distances,
    hopset_sssp,
    read_hopset,
    write_hopset,
)
from .overlay import (
    OverlayParams,
    OverlayNetwork,
    TypeAssignment,
    compute_types,
    select_centers,
    distances_to_centers,
    finish_sssp,
    combine,
    extract_path,
    approx_weighted_diameter,
    overlay_sssp,
)
from .simharness import (
    CostLedger,
    charge_broadcast,
    bounded_sssp_overlay,
    detect_rtz_overlay,
    clusters_overlay,
    run_congest_pipeline,
)
from .stream import EdgeStream, StreamLedger
from .altmodels import clique_sssp, stream_sssp
from .exceptions import (
    HopsetError,
    GraphError,
    GraphFormatError,
    DisconnectedGraph,
    ConfigurationError,
    Unhittable,
    IdWidthExceeded,
    NonIntegralRange,
    PreconditionViolated,
    WrongModel,
    NonRewindableStream,
    PropertyViolated,
    RulingSetViolation,
    VerificationFailed,
)
from .constants import INF

__version__ = "0.3.0"

__all__ = [
    "Graph",
    "DistanceTable",
    "HopDistanceTable",
    "dijkstra_bounded",
    "multi_source_dijkstra",
    "bellman_ford_hops",
    "round_weights",
    "hop_diameter",
    "read_edge_list",
    "write_edge_list",
    "parse_generator",
    "DetectionList",
    "detect_brute",
    "detect_local",
    "detect_rtz",
    "RulingSetResult",
    "ruling_set",
    "check_ruling_set",
    "PriorityHierarchy",
    "ClusterMap",
    "greedy_hitting_set",
    "compute_priorities",
    "compute_clusters",
    "list_size",
    "HopSetEdges",
    "AdditiveParams",
    "hop_reduction_additive",
    "hop_reduction",
    "hop_set",
    "approximate_distances",
    "hopset_sssp",
    "read_hopset",
    "write_hopset",
    "OverlayParams",
    "OverlayNetwork",
    "TypeAssignment",
    "compute_types",
    "select_centers",
    "distances_to_centers",
    "finish_sssp",
    "combine",
    "extract_path",
    "approx_weighted_diameter",
    "overlay_sssp",
    "CostLedger",
    "charge_broadcast",
    "bounded_sssp_overlay",
    "detect_rtz_overlay",
    "clusters_overlay",
    "run_congest_pipeline",
    "EdgeStream",
    "StreamLedger",
    "clique_sssp",
    "stream_sssp",
    "HopsetError",
    "GraphError",
    "GraphFormatError",
    "DisconnectedGraph",
    "ConfigurationError",
    "Unhittable",
    "IdWidthExceeded",
    "NonIntegralRange",
    "PreconditionViolated",
    "WrongModel",
    "NonRewindableStream",
    "PropertyViolated",
    "RulingSetViolation",
    "VerificationFailed",
    "INF",
]
