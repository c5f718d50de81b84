from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import FIXTURE6_EDGES, FIXTURE6_LABELS, random_graph
from localpop.decompose import channel_indegree, decompose_indegree, externally_popular_fraction
from localpop.graph_core import build_graph, edge_matrix
from localpop.hierarchy import GroupLabel


def _tally(tier, scope=None):
    """Per-patent (global, internal, external) by scanning the edge list."""
    glob, internal = Counter(), Counter()
    lab = {p: v[tier - 1] for p, v in FIXTURE6_LABELS.items()}
    for s, t in FIXTURE6_EDGES:
        if scope is not None and not (FIXTURE6_LABELS[s][0] == scope == FIXTURE6_LABELS[t][0]):
            continue
        glob[t] += 1
        internal[t] += lab[s] == lab[t]
    return glob, internal


@pytest.mark.parametrize("tier,scope", [(1, None), (2, None), (2, 1), (2, 2)])
def test_fixture_matches_edge_tally(fixture6, tier, scope):
    d = decompose_indegree(fixture6, tier, scope)
    glob, internal = _tally(tier, scope)
    pids = fixture6.original_ids[d.vertices].tolist()
    if scope is not None:
        assert pids == [p for p in sorted(FIXTURE6_LABELS) if FIXTURE6_LABELS[p][0] == scope]
    assert d.global_in.tolist() == [glob[p] for p in pids]
    assert d.internal_in.tolist() == [internal[p] for p in pids]
    assert d.external_in.tolist() == [glob[p] - internal[p] for p in pids]


def test_fixture_channels(fixture6):
    # patent 1 is cited by 2, 3 (category 1) and 4 (category 2)
    ch = channel_indegree(fixture6, 1, 2)
    assert fixture6.original_ids[ch.vertices].tolist() == [1, 2, 3]
    assert ch.counts.tolist() == [1, 0, 1]
    assert ch.total == edge_matrix(fixture6, 1).cell(2, 1)
    # across tiers: subcategory 22 into category 2
    assert channel_indegree(fixture6, 2, 22).counts.tolist() == [2, 1, 0]
    assert channel_indegree(fixture6, 11, 12).counts.tolist() == [1, 1]


def test_no_cross_edges():
    labels = {i: GroupLabel(1 + i % 2, 11 + 10 * (i % 2)) for i in range(8)}
    edges = [(i, j) for i in range(8) for j in range(i) if i % 2 == j % 2]
    g = build_graph(edges, labels)
    d = decompose_indegree(g, 1)
    assert (d.external_in == 0).all()
    assert np.array_equal(d.internal_in, d.global_in)
    assert externally_popular_fraction(d) == 0.0
    assert channel_indegree(g, 1, 2).counts.tolist() == [0, 0, 0, 0]


def test_externally_popular_fraction(fixture6):
    d = decompose_indegree(fixture6, 1)
    # externally cited: 1 (by 4), 3 (by 5), 6 (by 1)
    assert externally_popular_fraction(d) == pytest.approx(3 / 6)
    assert externally_popular_fraction(d.restrict(2)) == pytest.approx(1 / 3)


def test_errors(fixture6):
    with pytest.raises(ValueError):
        decompose_indegree(fixture6, 1, scope=1)
    with pytest.raises(ValueError):
        decompose_indegree(fixture6, 2, scope=5)
    with pytest.raises(ValueError):
        decompose_indegree(fixture6, 3)
    with pytest.raises(KeyError):
        channel_indegree(fixture6, 1, 4)
    with pytest.raises(ValueError):
        channel_indegree(fixture6, 11, 21, scope=1)
    with pytest.raises(KeyError):
        decompose_indegree(fixture6, 1).restrict(5)


def test_to_frame(fixture6):
    df = decompose_indegree(fixture6, 1).to_frame(fixture6)
    assert list(df.columns) == ["vertex", "group", "global", "internal", "external"]
    assert df["vertex"].tolist() == [1, 2, 3, 4, 5, 6]


graphs = st.builds(
    lambda seed, n, m, k: random_graph(np.random.default_rng(seed), n, m, k),
    st.integers(0, 2**32 - 1), st.integers(2, 300), st.integers(0, 2000), st.integers(2, 8))


@given(graphs)
def test_additivity_and_channel_aggregation(g):
    for tier in (1, 2):
        d = decompose_indegree(g, tier)
        assert len(d) == g.vertex_count
        assert np.array_equal(d.internal_in + d.external_in, d.global_in)
        em = edge_matrix(g, tier)
        for dest in g.groups(tier):
            members = g.vertices_in(dest)
            total = np.zeros(len(members), dtype=np.int64)
            for src in g.groups(tier):
                ch = channel_indegree(g, dest, src)
                assert ch.total == em.cell(src, dest)
                total += ch.counts
                if src == dest:
                    assert np.array_equal(ch.counts, d.internal_in[members])
            assert np.array_equal(total, d.global_in[members])


@given(graphs)
def test_scoped_additivity(g):
    for cat in g.groups(1):
        d = decompose_indegree(g, 2, scope=cat)
        assert len(d) == len(g.vertices_in(cat))
        assert np.array_equal(d.internal_in + d.external_in, d.global_in)
        inside = (g.tier1[g.sources] == cat) & (g.tier1[g.targets] == cat)
        assert d.global_in.sum() == inside.sum()
        total = sum(channel_indegree(g, dest, src, scope=cat).total
                    for dest in set(d.groups.tolist()) for src in set(d.groups.tolist()))
        assert total == inside.sum()
