"""Hierarchical clustering, dendrogram, and HSL-cut tests."""

import pytest

from commdetect import (
    Dendrogram,
    Graph,
    HslSpec,
    Linkage,
    Merge,
    agglomerate,
    cut,
    euclidean_distance,
    linkage_distance,
    neighbor_matrix,
)
from helpers import path_graph, random_suite
from oracles import agglomerate_direct


def test_euclidean_distance_examples():
    pair = Graph(2, [(0, 1)])
    assert euclidean_distance(neighbor_matrix(pair), 0, 1) == 2
    assert euclidean_distance(neighbor_matrix(pair, self_neighboring=True), 0, 1) == 0
    p3 = path_graph(3)
    assert euclidean_distance(neighbor_matrix(p3), 0, 2) == 0
    with pytest.raises(ValueError):
        euclidean_distance(neighbor_matrix(p3), 1, 1)


def test_linkage_distance():
    dist = {(0, 1): 0.0, (0, 2): 4.0, (1, 2): 7.0}

    def pairwise(a, b):
        return dist[(a, b) if a < b else (b, a)]

    for kind in Linkage:
        assert linkage_distance(kind, (0,), (2,), pairwise) == 4.0
    assert linkage_distance("single", (0, 1), (2,), pairwise) == 4.0
    assert linkage_distance("complete", (0, 1), (2,), pairwise) == 7.0
    assert linkage_distance("average", (0, 1), (2,), pairwise) == 5.5
    # the average times the pair count recovers the plain sum
    avg = linkage_distance("average", (0, 1), (2,), pairwise)
    assert avg * 2 == pairwise(0, 2) + pairwise(1, 2)
    with pytest.raises(ValueError):
        linkage_distance("single", (), (1,), pairwise)
    with pytest.raises(ValueError):
        linkage_distance("radius", (0,), (1,), pairwise)


def test_agglomerate_tiny_graphs():
    assert agglomerate(Graph(1), "single").merges == ()
    lone_pair = agglomerate(Graph(2), "single")
    assert lone_pair.merges == (Merge(0, 1, 2, 0.0, 0),)
    with pytest.raises(ValueError):
        agglomerate(Graph(0), "single")


def test_agglomerate_path_merge_order():
    # path 0-1-2: the endpoints share node 1, so they merge first at 0
    d = agglomerate(path_graph(3), "single")
    assert d.merges[0] == Merge(0, 2, 3, 0.0, 0)
    assert d.merges[1] == Merge(1, 3, 4, 3.0, 1)


def test_agglomerate_linkage_affects_merge_distance():
    # self-neighboring path 0-1-2: adjacent pairs sit at distance 1,
    # the endpoints at 2, so {0,1} merges first and the final merge
    # distance separates the linkage kinds.
    for kind, final in (("single", 1.0), ("complete", 2.0), ("average", 1.5)):
        d = agglomerate(path_graph(3), kind, self_neighboring=True)
        assert d.merges[0] == Merge(0, 1, 3, 1.0, 0)
        assert d.merges[1].distance == final


def test_dendrogram_invariants():
    for g in random_suite(10, 2, 9, (0.4,), 60):
        n = g.node_count
        d = agglomerate(g, "average")
        assert d.leaves == n
        assert len(d.merges) == n - 1
        new_ids = [m.merged for m in d.merges]
        assert new_ids == [n + s for s in range(n - 1)]
        consumed = [m.left for m in d.merges] + [m.right for m in d.merges]
        assert len(consumed) == len(set(consumed))
        root = n + (n - 2) if n > 1 else 0
        assert set(consumed) == (set(range(n)) | set(new_ids)) - {root}


def test_dendrogram_records_round_trip():
    d = agglomerate(path_graph(4), "complete")
    records = d.to_records()
    assert len(records) == 3
    assert records[0].keys() == {"left", "right", "merged", "distance", "step"}
    assert [r["step"] for r in records] == [0, 1, 2]


def test_agglomerate_matches_from_scratch_oracle():
    for g in random_suite(24, 2, 8, (0.3, 0.6), 2100):
        for kind in ("single", "complete", "average"):
            for self_neighboring in (False, True):
                d = agglomerate(g, kind, self_neighboring)
                expected = agglomerate_direct(g, kind, self_neighboring)
                got = [(m.left, m.right) for m in d.merges]
                assert got == [(a, b) for a, b, _ in expected]
                for merge, (_, _, dist) in zip(d.merges, expected):
                    assert merge.distance == pytest.approx(dist, abs=1e-12)


def test_hsl_spec_validation():
    HslSpec("absolute", 3)
    HslSpec("relative", 0.5)
    with pytest.raises(ValueError):
        HslSpec("diagonal", 0.5)
    with pytest.raises(ValueError):
        HslSpec("absolute", 1.5)
    with pytest.raises(ValueError):
        HslSpec("absolute", -1)
    with pytest.raises(ValueError):
        HslSpec("relative", 1.01)
    with pytest.raises(ValueError):
        HslSpec("relative", -0.01)


def test_cut_extremes_and_absolute():
    d = agglomerate(path_graph(3), "single")
    assert cut(d, HslSpec("relative", 0.0)).num_communities == 1
    assert cut(d, HslSpec("relative", 1.0)).num_communities == 3
    two = cut(d, HslSpec("absolute", 1))
    assert two.num_communities == 2
    assert two.labels == (0, 1, 0)
    assert cut(d, HslSpec("absolute", 0)).num_communities == 1
    with pytest.raises(ValueError):
        cut(d, HslSpec("absolute", 3))
    with pytest.raises(ValueError):
        cut(Dendrogram(3, ()), HslSpec("relative", 0.5))


def test_cut_relative_rounds_half_up():
    d = agglomerate(path_graph(3), "single")
    # 2 merges total: 0.25 maps to undoing 1, 0.75 to undoing both
    assert cut(d, HslSpec("relative", 0.25)).num_communities == 2
    assert cut(d, HslSpec("relative", 0.5)).num_communities == 2
    assert cut(d, HslSpec("relative", 0.75)).num_communities == 3


def test_cut_cluster_count_is_monotone_in_rel():
    for g in random_suite(8, 3, 10, (0.4,), 3000):
        for kind in ("single", "complete"):
            d = agglomerate(g, kind)
            counts = [
                cut(d, HslSpec("relative", r / 10)).num_communities
                for r in range(11)
            ]
            assert counts == sorted(counts)
            assert counts[0] == 1
            assert counts[-1] == g.node_count


def test_cut_partitions_are_total():
    for g in random_suite(6, 3, 9, (0.5,), 3200):
        d = agglomerate(g, "average", self_neighboring=True)
        part = cut(d, HslSpec("relative", 0.4))
        assert len(part) == g.node_count
        assert set(part.labels) == set(range(part.num_communities))


def test_karate_self_neighboring_improves_cohesion(karate):
    plain = cut(agglomerate(karate, "complete", False), HslSpec("relative", 0.3))
    selfn = cut(agglomerate(karate, "complete", True), HslSpec("relative", 0.3))
    assert selfn.num_communities <= plain.num_communities
    # with self-neighboring, node 25 lands in a cluster with its neighbors
    labels = selfn.labels
    assert any(labels[nbr] == labels[25] for nbr in karate.neighbors(25))
