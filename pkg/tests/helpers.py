"""Shared graph builders and replay instrumentation for the test suite."""

import random

from commdetect import Graph, random_graph
from commdetect.louvain import CommunityState, aggregate, delta_q_insert
from oracles import modularity_direct


def path_graph(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n):
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves):
    """K1,<leaves> with the hub as node 0."""
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_graph(n):
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def two_triangles():
    return Graph(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)])


def bridged_cliques(k):
    """Two K_k cliques joined by the single bridge (0, k)."""
    edges = [(i, j) for i in range(k) for j in range(i + 1, k)]
    edges += [(k + i, k + j) for i in range(k) for j in range(i + 1, k)]
    edges.append((0, k))
    return Graph(2 * k, edges)


def triangles_with_bridge():
    """Two triangles joined by the bridge (2, 3)."""
    return Graph(6, [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)])


def random_tree(n, seed):
    """Uniform random attachment tree on n nodes."""
    rng = random.Random(seed)
    return Graph(n, [(rng.randrange(i), i) for i in range(1, n)])


def random_suite(count, n_lo, n_hi, ps, base_seed, require_edges=True):
    """Seeded stream of random graphs covering the given size band."""
    out = []
    seed = base_seed
    while len(out) < count:
        n = n_lo + seed % (n_hi - n_lo + 1)
        p = ps[seed % len(ps)]
        g = random_graph(n, p, seed)
        seed += 1
        if require_edges and g.total_weight == 0:
            continue
        out.append(g)
    return out


def relabeled(g, perm):
    """Copy of g with node i renamed to perm[i]."""
    edges = [(perm[u], perm[v], w) for u, v, w in g.edges()]
    return Graph(g.node_count, edges)


def move_gain_checks(g, seed):
    """Replay a seeded multi-level local-move optimization.

    Yields one (closed_form_gain, direct_q_difference) pair per candidate
    community evaluated anywhere in the trajectory, where the closed form
    is the remove-then-insert net gain and the direct value recomputes
    both full modularities from scratch. Moves are applied exactly as the
    optimizer would apply them, so the checked states are the states the
    algorithm actually visits, including contracted levels with
    self-loops.
    """
    rng = random.Random(seed)
    level_graph = g
    while True:
        state = CommunityState(level_graph)
        moved_any = False
        improved = True
        while improved:
            improved = False
            order = list(range(level_graph.node_count))
            rng.shuffle(order)
            for i in order:
                c_old = state.remove(i)
                candidates = sorted(state.neighbor_communities(i) | {c_old})
                scores = {c: delta_q_insert(state, i, c) for c in candidates}
                base = list(state.assignment)
                base[i] = c_old
                q_before = modularity_direct(level_graph, base)
                for c in candidates:
                    trial = list(state.assignment)
                    trial[i] = c
                    q_after = modularity_direct(level_graph, trial)
                    yield scores[c] - scores[c_old], q_after - q_before
                best_c, best_score = c_old, scores[c_old]
                for c in candidates:
                    if c != c_old and scores[c] > best_score:
                        best_c, best_score = c, scores[c]
                if best_c != c_old and best_score - scores[c_old] > 1e-12:
                    state.insert(i, best_c)
                    improved = True
                    moved_any = True
                else:
                    state.insert(i, c_old)
        if not moved_any:
            return
        agg = aggregate(level_graph, state.partition())
        if agg.graph.node_count == level_graph.node_count:
            return
        level_graph = agg.graph
