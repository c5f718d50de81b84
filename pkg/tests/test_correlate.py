import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from localpop.correlate import (PearsonAccumulator, correlation_suite,
                                pairwise_channel_correlation, pearson)
from localpop.decompose import decompose_indegree
from localpop.graph_core import build_graph
from localpop.hierarchy import GroupLabel


def two_pass(x, y):
    """Textbook two-pass formula with exactly rounded sums."""
    x = [float(v) for v in x]
    y = [float(v) for v in y]
    n = len(x)
    mx, my = math.fsum(x) / n, math.fsum(y) / n
    dx = [v - mx for v in x]
    dy = [v - my for v in y]
    sxy = math.fsum(a * b for a, b in zip(dx, dy))
    sxx = math.fsum(a * a for a in dx)
    syy = math.fsum(b * b for b in dy)
    return sxy / math.sqrt(sxx * syy)


def test_matches_two_pass_on_random_pairs():
    rng = np.random.default_rng(2024)
    for _ in range(200):
        n = int(rng.integers(2, 2000))
        x = rng.integers(0, 10_000, n).astype(float)
        y = 0.3 * x + rng.normal(0, rng.uniform(1, 5000), n)
        assert abs(pearson(x, y) - two_pass(x, y)) < 1e-12


def test_large_vectors_across_blocks():
    rng = np.random.default_rng(5)
    n = 300_001  # several accumulation blocks
    x = rng.integers(0, 10_000, n)
    y = (x // 3 + rng.integers(0, 10_000, n)).astype(float) + 1e4
    assert abs(pearson(x, y) - two_pass(x, y)) < 1e-12


def test_self_correlation_and_undefined():
    v = np.array([3, 1, 4, 1, 5, 9, 2, 6])
    assert pearson(v, v) == pytest.approx(1.0, abs=1e-15)
    assert pearson(v, -v) == pytest.approx(-1.0, abs=1e-15)
    assert pearson(v, np.full(8, 7)) is None
    assert pearson(np.zeros(8), np.zeros(8)) is None


def test_input_errors():
    with pytest.raises(ValueError):
        pearson([1, 2, 3], [1, 2])
    with pytest.raises(ValueError):
        pearson([1], [1])


def test_accumulator_chunking_invariance():
    rng = np.random.default_rng(11)
    x, y = rng.normal(size=1000), rng.normal(size=1000)
    acc = PearsonAccumulator()
    for lo in range(0, 1000, 137):
        acc.update(x[lo:lo + 137], y[lo:lo + 137])
    assert abs(acc.pcc() - pearson(x, y)) < 1e-14


finite = st.floats(-1e4, 1e4, allow_nan=False)
vectors = st.integers(2, 60).flatmap(
    lambda n: st.tuples(arrays(np.float64, n, elements=finite), arrays(np.float64, n, elements=finite)))


@given(vectors)
def test_symmetric_and_bounded(xy):
    x, y = xy
    r = pearson(x, y)
    assert r == pearson(y, x)
    if r is not None:
        assert -1.0 <= r <= 1.0


@given(vectors, st.floats(0.01, 100), st.floats(-1e3, 1e3))
def test_affine_invariance(xy, scale, shift):
    x, y = xy
    r = pearson(x, y)
    assume(r is not None and np.ptp(x) > 1e-3 * np.abs(x).max() and np.ptp(y) > 1e-3 * np.abs(y).max())
    assert pearson(scale * x + shift, y) == pytest.approx(r, abs=1e-9)


def test_suite_on_graph_without_cross_edges():
    labels = {i: GroupLabel(1 + i % 2, 11 + 10 * (i % 2)) for i in range(10)}
    edges = [(i, j) for i in range(10) for j in range(i) if i % 2 == j % 2 and (i + j) % 3]
    d = decompose_indegree(build_graph(edges, labels), 1)
    gi, ge, ie = correlation_suite(d)
    assert gi.label == ("global", "internal") and gi.pcc == pytest.approx(1.0)
    assert ge.pcc is None and ie.pcc is None and not ge.defined
    assert ge.to_dict()["pcc"] is None


def test_suite_matches_direct_pearson(fixture6):
    d = decompose_indegree(fixture6, 1).restrict(1)
    gi, ge, ie = correlation_suite(d)
    assert gi.pcc == pearson(d.global_in, d.internal_in)
    assert ge.pcc == pearson(d.global_in, d.external_in)
    assert ie.n == 3


def test_pairwise_channel(fixture6):
    r = pairwise_channel_correlation(fixture6, 11, 12, 12, allow_same=True)
    assert r.pcc is None  # patent 3 cites both members of 11: a constant vector (1, 1)
    r = pairwise_channel_correlation(fixture6, 1, 2, 2, allow_same=True)
    assert r.pcc == pytest.approx(1.0)
    with pytest.raises(ValueError):
        pairwise_channel_correlation(fixture6, 1, 2, 2)
    with pytest.raises(ValueError):
        pairwise_channel_correlation(fixture6, 1, 1, 2)


def test_active_only_flag():
    labels = {i: GroupLabel(1, 11) for i in range(6)}
    labels.update({10: GroupLabel(2, 21), 11: GroupLabel(3, 31)})
    edges = [(10, 0), (10, 1), (11, 1), (11, 2)]
    g = build_graph(edges, labels)
    full = pairwise_channel_correlation(g, 1, 2, 3)
    active = pairwise_channel_correlation(g, 1, 2, 3, active_only=True)
    assert full.n == 6 and active.n == 3
    assert active.pcc == pytest.approx(pearson([1, 1, 0], [0, 1, 1]))
    assert full.pcc == pytest.approx(pearson([1, 1, 0, 0, 0, 0], [0, 1, 1, 0, 0, 0]))
