from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import FIXTURE6_EDGES, FIXTURE6_LABELS, random_graph
from localpop.graph_core import (EdgeMatrix, GraphBuildError, InvalidEdgeError, LabeledDigraph,
                                 UnlabeledVertexError, build_graph, edge_matrix)
from localpop.hierarchy import (CATEGORY_SIZES, SUBCATEGORIES, SUBCATEGORY_SIZES, GroupLabel,
                                group_tier, subcategories_of)


def test_smallest_cross_group_graph():
    g = build_graph([(10, 20)], {10: GroupLabel(1, 11), 20: GroupLabel(2, 21)})
    assert g.vertex_count == 2 and g.edge_count == 1
    assert g.indegree()[g.index_of(20)] == 1
    assert g.indegree()[g.index_of(10)] == 0


def test_fixture_adjacency_matches_edge_scan(fixture6):
    g = fixture6
    for pid in FIXTURE6_LABELS:
        v = g.index_of(pid)
        succ = sorted(g.original_ids[g.successors(v)].tolist())
        pred = sorted(g.original_ids[g.predecessors(v)].tolist())
        assert succ == sorted(t for s, t in FIXTURE6_EDGES if s == pid)
        assert pred == sorted(s for s, t in FIXTURE6_EDGES if t == pid)
        assert g.label(v) == GroupLabel(*FIXTURE6_LABELS[pid])


def test_fixture_edge_matrix_matches_tally(fixture6):
    for tier in (1, 2):
        tally = Counter((FIXTURE6_LABELS[s][tier - 1], FIXTURE6_LABELS[t][tier - 1])
                        for s, t in FIXTURE6_EDGES)
        em = edge_matrix(fixture6, tier)
        assert em.total == len(FIXTURE6_EDGES)
        for g in em.groups:
            for h in em.groups:
                assert em.cell(g, h) == tally.get((g, h), 0)
    assert edge_matrix(fixture6, 1).counts.tolist() == [[3, 1], [2, 3]]


def test_single_group_matrix_is_edge_count():
    labels = {i: GroupLabel(3, 31) for i in range(5)}
    g = build_graph([(1, 0), (2, 0), (3, 1), (4, 2)], labels)
    em = edge_matrix(g, 1)
    assert em.groups == (3,) and em.counts.tolist() == [[4]]


def test_edges_round_trip_original_ids(fixture6):
    assert sorted(map(tuple, fixture6.edges().tolist())) == sorted(FIXTURE6_EDGES)


def test_unlabeled_endpoint_names_the_id():
    with pytest.raises(UnlabeledVertexError) as exc:
        build_graph([(1, 2), (2, 99)], {1: GroupLabel(1, 11), 2: GroupLabel(1, 11)})
    assert exc.value.original_id == 99
    assert "99" in str(exc.value)


def test_self_loop_and_duplicate_rejected():
    labels = {1: GroupLabel(1, 11), 2: GroupLabel(1, 11)}
    with pytest.raises(InvalidEdgeError, match="self-loop"):
        build_graph([(1, 1)], labels)
    with pytest.raises(InvalidEdgeError, match="duplicate"):
        build_graph([(1, 2), (1, 2)], labels)


def test_inconsistent_labels_rejected():
    with pytest.raises(GraphBuildError):
        LabeledDigraph.from_arrays([], [], [1, 2], [1, 2], [11, 11])
    with pytest.raises(GraphBuildError):
        LabeledDigraph.from_arrays([0], [5], [1, 2], [1, 1], [11, 11])


def test_graph_is_immutable(fixture6):
    with pytest.raises(ValueError):
        fixture6.sources[0] = 3
    with pytest.raises(AttributeError):
        fixture6.sources = np.zeros(3)


def test_unknown_group_code(fixture6):
    with pytest.raises(KeyError):
        fixture6.vertices_in(3)
    with pytest.raises(KeyError):
        fixture6.vertices_in(23)


def test_group_label_invariants():
    assert GroupLabel.from_subcategory(69) == GroupLabel(6, 69)
    assert GroupLabel(6, 69).at(1) == 6 and GroupLabel(6, 69).at(2) == 69
    with pytest.raises(ValueError):
        GroupLabel(6, 59)
    assert group_tier(4) == 1 and group_tier(43) == 2
    with pytest.raises(KeyError):
        group_tier(100)


def test_hierarchy_sizes_consistent():
    assert len(SUBCATEGORIES) == 36
    for cat, size in CATEGORY_SIZES.items():
        assert size == sum(SUBCATEGORY_SIZES[s] for s in subcategories_of(cat))


def test_to_tier1_of_tier1_is_identity(fixture6):
    em = edge_matrix(fixture6, 1)
    assert em.to_tier1() is em
    assert edge_matrix(fixture6, 2).to_tier1() == em
    assert not (em == EdgeMatrix(1, em.groups, em.counts + 1))


graphs = st.builds(
    lambda seed, n, m, k: random_graph(np.random.default_rng(seed), n, m, k),
    st.integers(0, 2**32 - 1), st.integers(2, 300), st.integers(0, 1500), st.integers(1, 8))


@given(graphs)
def test_transpose_consistency(g):
    assert np.array_equal(g.outdegree(), np.bincount(g.sources, minlength=g.vertex_count))
    assert np.array_equal(g.indegree(), np.bincount(g.targets, minlength=g.vertex_count))
    fwd = {(int(v), int(w)) for v in range(g.vertex_count) for w in g.successors(v)}
    rev = {(int(w), int(v)) for v in range(g.vertex_count) for w in g.predecessors(v)}
    assert fwd == rev == set(zip(g.sources.tolist(), g.targets.tolist()))


@given(graphs)
def test_partition_and_matrix_invariants(g):
    for tier in (1, 2):
        assert sum(len(g.vertices_in(c)) for c in g.groups(tier)) == g.vertex_count
        em = edge_matrix(g, tier)
        assert em.total == g.edge_count and (em.counts >= 0).all()
        out = g.outdegree()
        for i, c in enumerate(em.groups):
            assert em.counts[i].sum() == out[g.vertices_in(c)].sum()
    assert edge_matrix(g, 2).to_tier1() == edge_matrix(g, 1)


@given(graphs)
def test_original_id_bijection(g):
    for v in range(0, g.vertex_count, max(1, g.vertex_count // 10)):
        assert g.index_of(g.original_ids[v]) == v
