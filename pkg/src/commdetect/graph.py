"""Graph container, dataset loaders, and the modularity evaluator.

Everything downstream (the clustering algorithms and the benchmark CLI)
works in terms of this module's value types: Graph, Partition, and
NeighborMatrix.
"""

import random
from collections import deque
from itertools import combinations

NodeId = int

__all__ = [
    "NodeId",
    "Graph",
    "Partition",
    "NeighborMatrix",
    "load_edge_list",
    "serialize_edge_list",
    "karate_club",
    "random_graph",
    "connected_components",
    "modularity",
    "neighbor_matrix",
]

# Zachary's karate club: 34 members, 78 friendship ties, the usual
# 0-indexed labeling.
_KARATE_EDGES = (
    (0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6), (0, 7), (0, 8),
    (0, 10), (0, 11), (0, 12), (0, 13), (0, 17), (0, 19), (0, 21), (0, 31),
    (1, 2), (1, 3), (1, 7), (1, 13), (1, 17), (1, 19), (1, 21), (1, 30),
    (2, 3), (2, 7), (2, 8), (2, 9), (2, 13), (2, 27), (2, 28), (2, 32),
    (3, 7), (3, 12), (3, 13), (4, 6), (4, 10), (5, 6), (5, 10), (5, 16),
    (6, 16), (8, 30), (8, 32), (8, 33), (9, 33), (13, 33), (14, 32),
    (14, 33), (15, 32), (15, 33), (18, 32), (18, 33), (19, 33), (20, 32),
    (20, 33), (22, 32), (22, 33), (23, 25), (23, 27), (23, 29), (23, 32),
    (23, 33), (24, 25), (24, 27), (24, 31), (25, 31), (26, 29), (26, 33),
    (27, 33), (28, 31), (28, 33), (29, 32), (29, 33), (30, 32), (30, 33),
    (31, 32), (31, 33), (32, 33),
)


class Graph:
    """Undirected weighted graph over contiguous node ids 0..node_count-1.

    Parallel edges are rejected. Self-loops are allowed (they appear when
    community graphs are contracted) and count twice toward the weighted
    degree, which keeps the degree sum equal to twice the total weight.

    Instances are immutable once constructed and safe to share across
    threads.
    """

    __slots__ = ("_n", "_adj", "_edges", "_m")

    def __init__(self, node_count, edges=()):
        if node_count < 0:
            raise ValueError("node_count must be non-negative")
        normalized = []
        for edge in edges:
            if len(edge) == 2:
                u, v = edge
                w = 1.0
            else:
                u, v, w = edge
            if not (isinstance(u, int) and isinstance(v, int)):
                raise ValueError(f"node ids must be integers, got ({u!r}, {v!r})")
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise ValueError(f"edge ({u}, {v}) outside node range 0..{node_count - 1}")
            w = float(w)
            if not w > 0:
                raise ValueError(f"edge ({u}, {v}) has non-positive weight {w}")
            if u > v:
                u, v = v, u
            normalized.append((u, v, w))
        normalized.sort()
        adj = [dict() for _ in range(node_count)]
        m = 0.0
        for u, v, w in normalized:
            if v in adj[u]:
                raise ValueError(f"duplicate edge ({u}, {v})")
            adj[u][v] = w
            adj[v][u] = w
            m += w
        self._n = node_count
        self._adj = adj
        self._edges = tuple(normalized)
        self._m = m

    @property
    def node_count(self):
        return self._n

    @property
    def edge_count(self):
        return len(self._edges)

    @property
    def total_weight(self):
        """Sum of all edge weights. Self-loops count once here."""
        return self._m

    def edges(self):
        """Iterate edges as (u, v, w) tuples with u <= v, ascending."""
        return iter(self._edges)

    def neighbors(self, i):
        """Neighbor-to-weight mapping for node i. Treat as read-only."""
        return self._adj[i]

    def has_edge(self, u, v):
        return 0 <= u < self._n and v in self._adj[u]

    def weight(self, u, v, default=0.0):
        if not 0 <= u < self._n:
            raise ValueError(f"node {u} out of range")
        return self._adj[u].get(v, default)

    def degree(self, i):
        """Number of distinct neighbors of i, self-loops excluded."""
        self._check_node(i)
        adj = self._adj[i]
        return len(adj) - (1 if i in adj else 0)

    def weighted_degree(self, i):
        """Total incident weight at node i; a self-loop contributes twice."""
        self._check_node(i)
        adj = self._adj[i]
        return sum(adj.values()) + adj.get(i, 0.0)

    def has_self_loops(self):
        return any(u == v for u, v, _ in self._edges)

    def _check_node(self, i):
        if not isinstance(i, int) or not 0 <= i < self._n:
            raise ValueError(f"node {i!r} out of range 0..{self._n - 1}")

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges

    def __hash__(self):
        return hash((self._n, self._edges))

    def __repr__(self):
        return f"Graph(nodes={self._n}, edges={len(self._edges)}, weight={self._m})"


class Partition:
    """Total assignment of nodes to integer community labels."""

    __slots__ = ("_labels",)

    def __init__(self, labels):
        labels = tuple(labels)
        for lab in labels:
            if not isinstance(lab, int) or lab < 0:
                raise ValueError(f"community labels must be non-negative integers, got {lab!r}")
        self._labels = labels

    @property
    def labels(self):
        return self._labels

    def __len__(self):
        return len(self._labels)

    @property
    def num_communities(self):
        return len(set(self._labels))

    def canonicalize(self):
        """Relabel communities 0..k-1 in order of first appearance."""
        mapping = {}
        out = []
        for lab in self._labels:
            if lab not in mapping:
                mapping[lab] = len(mapping)
            out.append(mapping[lab])
        return Partition(out)

    def communities(self):
        """Map each label to the sorted list of its member nodes."""
        groups = {}
        for node, lab in enumerate(self._labels):
            groups.setdefault(lab, []).append(node)
        return groups

    def to_dict(self, modularity=None):
        return {
            "labels": list(self._labels),
            "num_communities": self.num_communities,
            "modularity": modularity,
        }

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return self._labels == other._labels

    def __hash__(self):
        return hash(self._labels)

    def __repr__(self):
        return f"Partition({list(self._labels)!r})"


class NeighborMatrix:
    """Shared-neighbor counts backing the degree-based node distance.

    In self-neighboring mode every node is treated as a member of its own
    neighbor set, so each node's effective degree grows by one and every
    adjacent pair gains two shared neighbors (each endpoint now appears in
    the other's set).
    """

    __slots__ = ("_counts", "effective_degree", "self_neighboring")

    def __init__(self, counts, effective_degree, self_neighboring):
        self._counts = counts
        self.effective_degree = effective_degree
        self.self_neighboring = self_neighboring

    @property
    def node_count(self):
        return len(self.effective_degree)

    def shared(self, i, j):
        """Number of shared neighbors of the distinct nodes i and j."""
        if i == j:
            raise ValueError("shared-neighbor count is defined for distinct nodes only")
        key = (i, j) if i < j else (j, i)
        return self._counts.get(key, 0)


def load_edge_list(source):
    """Parse a whitespace-separated edge list into a Graph.

    `source` is a string or an iterable of lines. Blank lines and lines
    starting with '#' are ignored. Each remaining line is either "u v" or
    "u v w"; the weight defaults to 1. Node count is the highest id plus
    one. Malformed lines, non-positive weights, and duplicate edges raise
    ValueError naming the offending line.
    """
    lines = source.splitlines() if isinstance(source, str) else source
    edges = []
    seen = set()
    max_id = -1
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ValueError(f"line {lineno}: expected 'u v' or 'u v w', got {line!r}")
        try:
            u = int(parts[0])
            v = int(parts[1])
        except ValueError:
            raise ValueError(f"line {lineno}: node ids must be integers in {line!r}") from None
        if u < 0 or v < 0:
            raise ValueError(f"line {lineno}: node ids must be non-negative in {line!r}")
        if len(parts) == 3:
            try:
                w = float(parts[2])
            except ValueError:
                raise ValueError(f"line {lineno}: bad edge weight in {line!r}") from None
        else:
            w = 1.0
        if not w > 0:
            raise ValueError(f"line {lineno}: edge weight must be positive, got {w}")
        key = (u, v) if u <= v else (v, u)
        if key in seen:
            raise ValueError(f"line {lineno}: duplicate edge {key}")
        seen.add(key)
        edges.append((u, v, w))
        if v > max_id or u > max_id:
            max_id = max(u, v)
    return Graph(max_id + 1, edges)


def serialize_edge_list(g):
    """Render a Graph back to edge-list text; inverse of load_edge_list.

    Nodes are only represented through their edges, so a graph whose
    highest-numbered node is isolated does not survive the round trip.
    """
    lines = [f"{u} {v} {w!r}" for u, v, w in g.edges()]
    return "\n".join(lines) + ("\n" if lines else "")


def karate_club():
    """Zachary's karate club graph: 34 nodes, 78 unit-weight edges."""
    return Graph(34, _KARATE_EDGES)


def random_graph(n, p, seed):
    """Erdos-Renyi G(n, p) graph drawn with the given seed."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    rng = random.Random(seed)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges.append((i, j))
    return Graph(n, edges)


def connected_components(g):
    """Label nodes by connected component, numbered in first-seen order."""
    labels = [-1] * g.node_count
    comp = 0
    for start in range(g.node_count):
        if labels[start] != -1:
            continue
        labels[start] = comp
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in g.neighbors(u):
                if labels[v] == -1:
                    labels[v] = comp
                    queue.append(v)
        comp += 1
    return Partition(labels)


def modularity(g, partition):
    """Modularity Q of a node partition.

    Computed per community as sigma_in/2m - (sigma_tot/2m)^2, where
    sigma_in is the total adjacency mass inside the community (twice the
    intra-community edge weight, self-loops contributing twice their
    weight) and sigma_tot is the sum of member weighted degrees. Raises
    ValueError for an edgeless graph or a label sequence of wrong length.
    """
    labels = partition.labels if isinstance(partition, Partition) else partition
    if len(labels) != g.node_count:
        raise ValueError("partition length does not match node count")
    m = g.total_weight
    if m == 0:
        raise ValueError("modularity is undefined for a graph with no edges")
    two_m = 2.0 * m
    sigma_in = {}
    sigma_tot = {}
    for i in range(g.node_count):
        c = labels[i]
        sigma_tot[c] = sigma_tot.get(c, 0.0) + g.weighted_degree(i)
    for u, v, w in g.edges():
        if labels[u] == labels[v]:
            c = labels[u]
            sigma_in[c] = sigma_in.get(c, 0.0) + 2.0 * w
    return sum(
        sigma_in.get(c, 0.0) / two_m - (tot / two_m) ** 2
        for c, tot in sigma_tot.items()
    )


def neighbor_matrix(g, self_neighboring=False):
    """Shared-neighbor counts for every node pair of a simple graph.

    With self_neighboring enabled each node also counts as its own
    neighbor: effective degrees grow by one and adjacent pairs gain two
    shared neighbors. Raises ValueError if the graph has self-loops.
    """
    if g.has_self_loops():
        raise ValueError("neighbor matrix requires a simple graph (no self-loops)")
    counts = {}
    for mid in range(g.node_count):
        for i, j in combinations(sorted(g.neighbors(mid)), 2):
            key = (i, j)
            counts[key] = counts.get(key, 0) + 1
    if self_neighboring:
        for u, v, _ in g.edges():
            counts[(u, v)] = counts.get((u, v), 0) + 2
    bump = 1 if self_neighboring else 0
    effective = tuple(g.degree(i) + bump for i in range(g.node_count))
    return NeighborMatrix(counts, effective, self_neighboring)
