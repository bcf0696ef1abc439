"""Bottom-up hierarchical clustering over graph-derived node distances.

Node similarity comes from shared-neighbor counts: the distance between
two nodes is effective_degree(i) + effective_degree(j) minus twice their
shared-neighbor count, which is the squared Euclidean distance between
their neighborhood indicator vectors. Clusters are merged greedily under
a chosen linkage and the merge history is kept as a dendrogram that can
be cut into a flat partition.
"""

import math
from dataclasses import dataclass
from enum import Enum

from .graph import Partition, neighbor_matrix

__all__ = [
    "Linkage",
    "Merge",
    "Dendrogram",
    "HslSpec",
    "euclidean_distance",
    "linkage_distance",
    "agglomerate",
    "cut",
]


class Linkage(str, Enum):
    SINGLE = "single"
    COMPLETE = "complete"
    AVERAGE = "average"


@dataclass(frozen=True)
class Merge:
    """One merge event: clusters `left` and `right` become `merged`."""

    left: int
    right: int
    merged: int
    distance: float
    step: int

    def to_record(self):
        return {
            "left": self.left,
            "right": self.right,
            "merged": self.merged,
            "distance": self.distance,
            "step": self.step,
        }


@dataclass(frozen=True)
class Dendrogram:
    """Full merge history over `leaves` original nodes.

    Leaves are clusters 0..leaves-1; merge step s creates cluster
    leaves + s. A complete agglomeration has exactly leaves - 1 merges.
    """

    leaves: int
    merges: tuple

    def to_records(self):
        return [m.to_record() for m in self.merges]


@dataclass(frozen=True)
class HslSpec:
    """Where to cut a dendrogram.

    mode "absolute": value is an integer count of final merges to undo.
    mode "relative": value in [0, 1]; 0 keeps every merge (one cluster),
    1 undoes them all (every node its own cluster).
    """

    mode: str
    value: float

    def __post_init__(self):
        if self.mode not in ("absolute", "relative"):
            raise ValueError(f"unknown cut mode {self.mode!r}")
        if self.mode == "absolute":
            if self.value != int(self.value) or self.value < 0:
                raise ValueError("absolute cut value must be a non-negative integer")
        else:
            if not 0.0 <= self.value <= 1.0:
                raise ValueError("relative cut value must lie in [0, 1]")


def euclidean_distance(nm, i, j):
    """Distance k_i + k_j - 2*n_ij between two distinct nodes."""
    if i == j:
        raise ValueError("distance is defined for distinct nodes only")
    return nm.effective_degree[i] + nm.effective_degree[j] - 2 * nm.shared(i, j)


def linkage_distance(kind, cluster_a, cluster_b, pairwise):
    """Inter-cluster distance under a linkage rule.

    `pairwise` is a callable giving the distance between two nodes. Single
    linkage takes the minimum over cross pairs, complete the maximum,
    average the arithmetic mean.
    """
    kind = Linkage(kind)
    if not cluster_a or not cluster_b:
        raise ValueError("linkage distance requires two non-empty clusters")
    if kind is Linkage.SINGLE:
        return min(pairwise(a, b) for a in cluster_a for b in cluster_b)
    if kind is Linkage.COMPLETE:
        return max(pairwise(a, b) for a in cluster_a for b in cluster_b)
    total = sum(pairwise(a, b) for a in cluster_a for b in cluster_b)
    return total / (len(cluster_a) * len(cluster_b))


def agglomerate(g, kind, self_neighboring=False):
    """Merge clusters greedily until one remains; return the dendrogram.

    All pairwise node distances are computed once up front; inter-cluster
    linkage values are recomputed from that matrix at every step. The pair
    with the smallest linkage distance is merged, ties going to the
    lexicographically smallest (min cluster id, max cluster id) pair, so
    the merge sequence is deterministic. Requires a simple graph with at
    least one node.
    """
    kind = Linkage(kind)
    n = g.node_count
    if n < 1:
        raise ValueError("agglomeration requires at least one node")
    nm = neighbor_matrix(g, self_neighboring)
    dist = {}
    for i in range(n):
        for j in range(i + 1, n):
            dist[(i, j)] = euclidean_distance(nm, i, j)

    def pairwise(a, b):
        return dist[(a, b) if a < b else (b, a)]

    clusters = {i: (i,) for i in range(n)}
    merges = []
    for step in range(n - 1):
        active = sorted(clusters)
        best = None
        for ai in range(len(active)):
            for bi in range(ai + 1, len(active)):
                a, b = active[ai], active[bi]
                d = linkage_distance(kind, clusters[a], clusters[b], pairwise)
                key = (d, a, b)
                if best is None or key < best:
                    best = key
        d, a, b = best
        merged = n + step
        merges.append(Merge(a, b, merged, float(d), step))
        clusters[merged] = clusters.pop(a) + clusters.pop(b)
    return Dendrogram(n, tuple(merges))


def cut(dendrogram, spec):
    """Flatten a dendrogram into a Partition per an HslSpec.

    Undoing s merges leaves the partition after the first n-1-s merges,
    so s = 0 gives one cluster and s = n-1 gives all singletons. Relative
    values map to s = round(value * (n - 1)) with halves rounding up.
    """
    n = dendrogram.leaves
    if n < 1:
        raise ValueError("cannot cut an empty dendrogram")
    total = n - 1
    if len(dendrogram.merges) != total:
        raise ValueError("dendrogram is not a complete merge history")
    if spec.mode == "absolute":
        undo = int(spec.value)
        if undo > total:
            raise ValueError(f"cannot undo {undo} merges, only {total} were made")
    else:
        undo = math.floor(spec.value * total + 0.5)
    parent = {}
    for merge in dendrogram.merges[: total - undo]:
        parent[merge.left] = merge.merged
        parent[merge.right] = merge.merged

    def root(c):
        seen = []
        while c in parent:
            seen.append(c)
            c = parent[c]
        for s in seen:
            parent[s] = c
        return c

    labels = [root(i) for i in range(n)]
    return Partition(labels).canonicalize()
