"""Static, sequential-dynamic and distributed minimum spanning trees, with oracles."""

from .graph import (
    SENTINEL,
    DisconnectedGraphError,
    DuplicateWeightError,
    GraphError,
    NotSpanningError,
    ParseError,
    SelfLoopError,
    SpanningTree,
    Verdict,
    WeightedEdge,
    WeightedGraph,
    fundamental_cycle,
    load_graph,
    save_graph,
    ternarize,
    verify_mst_properties,
)
from .static import UnionFind, kruskal, prim
from .oracle import (
    all_min_replacements,
    brute_force_mst_weight,
    max_tree_edge_on_cycle,
    min_replacement_for_tree_edge,
    recompute_after,
    swap_distance,
)
from .responsibility import ResponsibilityIndex, UpdateOutcome, initialize
from .topology import (
    RestrictedPartition,
    TopologyDynamicMST,
    TopologyHierarchy,
    build_partition,
    check_conditions,
)
from .sim import SeededDelay, Simulation, SimulationError, UnitDelay, build_network, run
from .ghs import message_bound, run_chin_ting, run_ghs, time_bound
from .distdyn import DistributedDynamicMST, form_clusters
from .generators import generate, generate_graph

__version__ = "0.1.0"
