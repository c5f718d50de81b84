from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from localpop.graph_core import edge_matrix
from conftest import random_config
from localpop.hierarchy import GroupLabel
from localpop.ingest import load_graph, write_graph
from localpop.generate import (GeneratorConfig, InfeasibleMatrixError, LocalAttachmentGenerator,
                               generate, uspcn_like_config)


def _check(cfg: GeneratorConfig):
    g = generate(cfg)
    em = edge_matrix(g, cfg.tier)
    codes = [lab.at(cfg.tier) for lab in cfg.groups]
    present = [c for c, s in zip(codes, cfg.sizes) if s > 0]
    assert em.groups == tuple(sorted(present))
    for i, a in enumerate(codes):
        for j, b in enumerate(codes):
            if a in em.groups and b in em.groups:
                assert em.cell(a, b) == cfg.matrix[i, j]
    assert g.vertex_count == sum(cfg.sizes)
    assert np.all(g.sources > g.targets)
    if cfg.window_arrivals is not None:
        assert np.all(g.sources - g.targets <= cfg.window_arrivals)
    return g


def test_zero_matrix_gives_empty_graph():
    cfg = GeneratorConfig((GroupLabel(1, 11), GroupLabel(2, 21)), (10, 20), np.zeros((2, 2)))
    g = generate(cfg)
    assert g.edge_count == 0 and g.vertex_count == 30


def test_two_block_example_is_exact():
    cfg = GeneratorConfig((GroupLabel(1, 11), GroupLabel(2, 21)), (1000, 1000),
                          np.array([[5000, 500], [500, 5000]]), seed=3)
    g = _check(cfg)
    assert edge_matrix(g, 1).counts.tolist() == [[5000, 500], [500, 5000]]


@given(st.integers(0, 2**32 - 1), st.sampled_from([1, 2]),
       st.sampled_from([None, 0.3, 0.6]), st.sampled_from(["interleaved", "grouped"]))
def test_exact_matrix_and_acyclicity(seed, tier, window, arrival):
    cfg = random_config(np.random.default_rng(seed), tier, window, arrival)
    if arrival == "grouped":
        # a group arriving first cannot cite later groups
        order = np.arange(len(cfg.groups))
        m = np.where(order[:, None] > order[None, :], cfg.matrix, 0)
        np.fill_diagonal(m, np.diag(cfg.matrix))
        cfg = GeneratorConfig(cfg.groups, cfg.sizes, m, cfg.tier, cfg.smoothing, cfg.seed,
                              arrival, None)
    _check(cfg)


def test_determinism_and_seed_sensitivity():
    cfg = random_config(np.random.default_rng(42))
    a, b = generate(cfg), generate(cfg)
    assert np.array_equal(a.sources, b.sources) and np.array_equal(a.targets, b.targets)
    assert np.array_equal(a.tier2, b.tier2)
    other = generate(GeneratorConfig.from_dict({**cfg.to_dict(), "seed": cfg.seed + 1}))
    assert not (np.array_equal(a.sources, other.sources) and np.array_equal(a.targets, other.targets))


def test_infeasible_cell_is_named():
    cfg = GeneratorConfig((GroupLabel(1, 11), GroupLabel(4, 41)), (3, 3),
                          np.array([[0, 0], [100, 0]]))
    with pytest.raises(InfeasibleMatrixError) as exc:
        generate(cfg)
    assert exc.value.cell == (4, 1)
    assert exc.value.demand == 100 and exc.value.capacity <= 9
    assert "4 -> 1" in str(exc.value) or "(4, 1)" in str(exc.value)


def test_internal_cell_over_simple_graph_limit():
    cfg = GeneratorConfig((GroupLabel(1, 11),), (5,), np.array([[11]]))
    with pytest.raises(InfeasibleMatrixError):
        generate(cfg)
    _check(GeneratorConfig((GroupLabel(1, 11),), (5,), np.array([[10]])))


def test_channel_counters_only_see_their_own_edges(monkeypatch):
    calls = []
    original = LocalAttachmentGenerator._draw

    def spy(hits, pool, lo, want, a, uni, cutoff):
        snapshot = Counter(hits)
        chosen = original(hits, pool, lo, want, a, uni, cutoff)
        calls.append((id(hits), snapshot, list(chosen)))
        return chosen

    monkeypatch.setattr(LocalAttachmentGenerator, "_draw", staticmethod(spy))
    cfg = random_config(np.random.default_rng(5))
    gen = LocalAttachmentGenerator(cfg)
    graph = gen.run()
    so_far: dict[int, Counter] = {}
    for key, snapshot, chosen in calls:
        assert snapshot == so_far.get(key, Counter())
        so_far.setdefault(key, Counter()).update(chosen)
    # one counter per channel, and each equals that channel's final edge tally
    finals = sorted(sorted(c.items()) for c in so_far.values())
    expected = sorted(sorted(Counter(t).items()) for t in gen.channel_targets.values() if t)
    assert finals == expected
    labels = graph.tier1
    for (g, h), targets in gen.channel_targets.items():
        src_code, dst_code = cfg.groups[g].tier1, cfg.groups[h].tier1
        mask = (labels[graph.sources] == src_code) & (labels[graph.targets] == dst_code)
        assert Counter(graph.targets[mask].tolist()) == Counter(targets)
    counts = gen.channel_counts(graph.vertex_count)
    assert sum(c.sum() for c in counts.values()) == graph.edge_count


def test_round_trip_through_ingest(tmp_path):
    cfg = random_config(np.random.default_rng(8), tier=2)
    g = generate(cfg)
    back, report = load_graph(*write_graph(g, tmp_path))
    assert report.retained_edge_count == g.edge_count
    assert report.dropped_duplicate_count == report.dropped_self_loop_count == 0
    assert edge_matrix(back, 2) == edge_matrix(g, 2)
    assert np.array_equal(back.edges(), g.edges())


def test_config_validation_and_io(tmp_path):
    labs = (GroupLabel(1, 11), GroupLabel(2, 21))
    with pytest.raises(ValueError):
        GeneratorConfig(labs, (1, 2, 3), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        GeneratorConfig(labs, (2, 2), -np.ones((2, 2)))
    with pytest.raises(ValueError):
        GeneratorConfig(labs, (2, 2), np.zeros((2, 2)), smoothing=0.0)
    with pytest.raises(ValueError):
        GeneratorConfig(labs, (2, 2), np.zeros((2, 2)), arrival="sorted")
    with pytest.raises(ValueError):
        GeneratorConfig(labs, (2, 2), np.zeros((2, 2)), window=1.5)
    with pytest.raises(ValueError):
        GeneratorConfig((GroupLabel(1, 11), GroupLabel(1, 12)), (2, 2), np.zeros((2, 2)))
    cfg = random_config(np.random.default_rng(1), window=0.5)
    path = tmp_path / "cfg.json"
    import json
    path.write_text(json.dumps(cfg.to_dict()))
    back = GeneratorConfig.load(path)
    assert back.to_dict() == cfg.to_dict()
    short = GeneratorConfig.from_dict({"groups": [3, 5], "sizes": [4, 4], "matrix": [[1, 0], [2, 1]]})
    assert short.groups == (GroupLabel(3, 31), GroupLabel(5, 51)) and short.smoothing == 1.0


def test_uspcn_like_config_shape():
    cfg = uspcn_like_config()
    m = cfg.matrix
    off = m[~np.eye(6, dtype=bool)]
    assert np.diag(m).min() >= 10 * off.max()
    assert cfg.sizes == (22868, 10947, 6976, 19400, 26534, 25293)
    assert [g.tier1 for g in cfg.groups] == [1, 2, 3, 4, 5, 6]
