"""Community detection toolkit.

Four clustering algorithms over one plain graph type: agglomerative
hierarchical clustering on shared-neighbor distances, divisive clustering
by edge betweenness (iterative and static), multi-variant Louvain, and
greedy modularity agglomeration. A CLI exposes single runs, benchmark
sweeps, and plot-data export.
"""

from .agglomerative import (
    Dendrogram,
    HslSpec,
    Linkage,
    Merge,
    agglomerate,
    cut,
    euclidean_distance,
    linkage_distance,
)
from .fastgreedy import (
    DeltaQStore,
    GlobalHeap,
    best_join,
    fastgreedy,
    init_fastgreedy,
    join,
)
from .girvan_newman import (
    BfsTree,
    bfs_tree,
    edge_betweenness,
    girvan_newman,
    girvan_newman_static,
)
from .graph import (
    Graph,
    NeighborMatrix,
    NodeId,
    Partition,
    connected_components,
    karate_club,
    load_edge_list,
    modularity,
    neighbor_matrix,
    random_graph,
    serialize_edge_list,
)
from .louvain import (
    AggregateGraph,
    CommunityState,
    LouvainStats,
    LouvainVariant,
    aggregate,
    delta_q_insert,
    local_move_pass,
    louvain,
    run_stats,
)

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "Partition",
    "NeighborMatrix",
    "NodeId",
    "load_edge_list",
    "serialize_edge_list",
    "karate_club",
    "random_graph",
    "connected_components",
    "modularity",
    "neighbor_matrix",
    "Linkage",
    "Merge",
    "Dendrogram",
    "HslSpec",
    "euclidean_distance",
    "linkage_distance",
    "agglomerate",
    "cut",
    "BfsTree",
    "bfs_tree",
    "edge_betweenness",
    "girvan_newman",
    "girvan_newman_static",
    "LouvainVariant",
    "CommunityState",
    "AggregateGraph",
    "LouvainStats",
    "delta_q_insert",
    "local_move_pass",
    "aggregate",
    "louvain",
    "run_stats",
    "DeltaQStore",
    "GlobalHeap",
    "init_fastgreedy",
    "best_join",
    "join",
    "fastgreedy",
]
