"""Greedy modularity agglomeration over a sparse pair-gain store.

Starting from singleton communities, the pair whose merge increases
modularity the most is joined repeatedly. The pairwise gains live in a
sparse symmetric store holding entries only for community pairs that
share at least one edge, and a single global max-heap over every stored
cell picks the next join; superseded heap entries are dropped lazily
when popped. Gains are updated in place after each join instead of being
recomputed, so one full run costs roughly O(m log n) heap traffic.
"""

import heapq

from .agglomerative import Dendrogram, Merge
from .graph import Partition

__all__ = [
    "DeltaQStore",
    "GlobalHeap",
    "init_fastgreedy",
    "best_join",
    "join",
    "fastgreedy",
]

# Gains closer together than this are treated as tied, so the smallest
# (i, j) pair wins regardless of which float happens to be a few ulps
# ahead after incremental updates.
_TIE_EPS = 1e-12


class DeltaQStore:
    """Symmetric sparse map of merge gains between live communities."""

    def __init__(self, node_count):
        self.rows = {i: {} for i in range(node_count)}
        self.alive = set(range(node_count))

    def get(self, i, j):
        return self.rows[i][j]

    def has(self, i, j):
        return i in self.rows and j in self.rows[i]

    def set(self, i, j, value):
        self.rows[i][j] = value
        self.rows[j][i] = value

    def retire(self, i):
        """Drop community i: its row and every mirrored cell disappear."""
        for k in self.rows.pop(i):
            del self.rows[k][i]
        self.alive.remove(i)

    def pairs(self):
        for i, row in self.rows.items():
            for j, value in row.items():
                if i < j:
                    yield i, j, value


class GlobalHeap:
    """One max-heap over every store cell, with lazy staleness checks.

    Every push stamps the entry with a per-pair version counter; bumping
    the counter (on update or retirement) invalidates whatever entries
    for that pair are still queued. Stale entries are discarded for good
    the moment they surface.
    """

    def __init__(self):
        self._entries = []
        self._version = {}

    @staticmethod
    def _key(i, j):
        return (i, j) if i < j else (j, i)

    def push(self, i, j, dq):
        key = self._key(i, j)
        version = self._version.get(key, 0) + 1
        self._version[key] = version
        heapq.heappush(self._entries, (-dq, key[0], key[1], version))

    def invalidate(self, i, j):
        key = self._key(i, j)
        if key in self._version:
            self._version[key] += 1

    def _pop_valid(self):
        while self._entries:
            neg_dq, i, j, version = heapq.heappop(self._entries)
            if self._version.get((i, j)) == version:
                return i, j, -neg_dq
        return None

    def pop_best(self):
        """Return (i, j, dq) for the best current pair, or None if empty.

        Pairs whose gains sit within _TIE_EPS of the maximum count as
        tied and the smallest (i, j) among them wins; the rest go back
        on the heap.
        """
        first = self._pop_valid()
        if first is None:
            return None
        group = [first]
        while True:
            entry = self._pop_valid()
            if entry is None:
                break
            if entry[2] >= first[2] - _TIE_EPS:
                group.append(entry)
            else:
                self.push(*entry)
                break
        group.sort()
        for entry in group[1:]:
            self.push(*entry)
        return group[0]

    def __len__(self):
        return len(self._entries)


def init_fastgreedy(g):
    """Build the initial store, heap, and community weight fractions.

    For singleton communities the gain of joining connected i and j is
    w_ij/m - 2*a_i*a_j with a_i = k_i/2m, the exact modularity change of
    that merge. Requires a simple graph with at least one edge.
    """
    m = g.total_weight
    if m == 0:
        raise ValueError("greedy agglomeration needs at least one edge")
    if g.has_self_loops():
        raise ValueError("greedy agglomeration requires a simple graph (no self-loops)")
    two_m = 2.0 * m
    a = {i: g.weighted_degree(i) / two_m for i in range(g.node_count)}
    store = DeltaQStore(g.node_count)
    heap = GlobalHeap()
    for u, v, w in g.edges():
        dq = w / m - 2.0 * a[u] * a[v]
        store.set(u, v, dq)
        heap.push(u, v, dq)
    return store, heap, a


def best_join(store, heap):
    """Pop the highest-gain live pair, or None when no pair is joinable.

    Ties on gain resolve to the smallest (i, j). Entries that no longer
    match the store are discarded permanently as they surface.
    """
    return heap.pop_best()


def _apply_join(store, heap, a, i, j, dq):
    """Merge community i into j (the result keeps label j).

    Third communities connected to either side get their gain toward the
    merged community rewritten in place:
      both sides:  dq_ik + dq_jk
      only i:      dq_ik - 2*a_j*a_k
      only j:      dq_jk - 2*a_i*a_k
    using the pre-merge weight fractions, after which a_j absorbs a_i.
    """
    row_i = store.rows[i]
    row_j = store.rows[j]
    others = (set(row_i) | set(row_j)) - {i, j}
    a_i = a[i]
    a_j = a[j]
    for k in sorted(others):
        in_i = k in row_i
        in_j = k in row_j
        if in_i and in_j:
            new = row_i[k] + row_j[k]
        elif in_i:
            new = row_i[k] - 2.0 * a_j * a[k]
        else:
            new = row_j[k] - 2.0 * a_i * a[k]
        store.set(j, k, new)
        heap.push(j, k, new)
    for k in row_i:
        heap.invalidate(i, k)
    store.retire(i)
    a[j] = a_i + a_j
    del a[i]
    return dq


def join(store, heap, a, i, j):
    """Merge the stored pair (i, j) into j and rewrite affected gains.

    Raises ValueError when either community is dead or the pair has no
    stored entry (communities in different components cannot be joined
    through the store).
    """
    if i == j:
        raise ValueError("cannot join a community with itself")
    if i not in store.alive or j not in store.alive:
        raise ValueError(f"cannot join dead community in pair ({i}, {j})")
    if not store.has(i, j):
        raise ValueError(f"no stored gain for pair ({i}, {j})")
    dq = store.get(i, j)
    return _apply_join(store, heap, a, i, j, dq)


def fastgreedy(g):
    """Full greedy agglomeration of `g`.

    Joins the best pair until none remains, then force-joins leftover
    components pairwise in ascending id order (each such join changes
    modularity by exactly -2*a_i*a_j). Returns the complete dendrogram,
    the partition at the running-modularity maximum, and that maximum.
    """
    store, heap, a = init_fastgreedy(g)
    n = g.node_count
    assignment = list(range(n))
    members = {i: [i] for i in range(n)}
    cluster_id = {i: i for i in range(n)}
    q = -sum(v * v for v in a.values())
    best_q = q
    best_assignment = list(assignment)
    merges = []
    step = 0
    while len(store.alive) > 1:
        picked = best_join(store, heap)
        if picked is None:
            # Disconnected remnants: join the two lowest-numbered ones.
            i, j = sorted(store.alive)[:2]
            dq = -2.0 * a[i] * a[j]
            _apply_join(store, heap, a, i, j, dq)
        else:
            i, j, _ = picked
            dq = join(store, heap, a, i, j)
        q += dq
        merges.append(Merge(cluster_id[i], cluster_id[j], n + step, dq, step))
        cluster_id[j] = n + step
        del cluster_id[i]
        for node in members[i]:
            assignment[node] = j
        members[j].extend(members[i])
        del members[i]
        step += 1
        if q > best_q:
            best_q = q
            best_assignment = list(assignment)
    dendrogram = Dendrogram(n, tuple(merges))
    return dendrogram, Partition(best_assignment).canonicalize(), best_q
