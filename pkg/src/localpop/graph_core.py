"""Immutable labeled digraph with CSR adjacency in both directions."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from .hierarchy import GroupLabel, group_tier


class GraphBuildError(ValueError):
    pass


class UnlabeledVertexError(GraphBuildError):
    def __init__(self, original_id):
        super().__init__(f"edge endpoint {original_id} has no group label")
        self.original_id = original_id


class InvalidEdgeError(GraphBuildError):
    pass


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


def _csr(rows: np.ndarray, cols: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    order = np.argsort(rows, kind="stable")
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
    return indptr, cols[order]


@dataclass(frozen=True, eq=False)
class LabeledDigraph:
    """Directed simple graph over dense vertex ids ``0..n-1``.

    ``original_ids[v]`` is the external identifier of vertex ``v`` (sorted
    ascending, so the mapping is a bijection recoverable by binary search).
    Edge arrays keep ingest order. Build through :func:`build_graph` or
    :meth:`from_arrays`; all arrays are read-only.
    """

    original_ids: np.ndarray
    tier1: np.ndarray
    tier2: np.ndarray
    sources: np.ndarray
    targets: np.ndarray
    out_indptr: np.ndarray
    out_indices: np.ndarray
    in_indptr: np.ndarray
    in_indices: np.ndarray

    @classmethod
    def from_arrays(cls, sources, targets, original_ids, tier1, tier2,
                    validate: bool = True) -> "LabeledDigraph":
        original_ids = np.asarray(original_ids, dtype=np.int64)
        tier1 = np.asarray(tier1, dtype=np.int16)
        tier2 = np.asarray(tier2, dtype=np.int16)
        src = np.asarray(sources, dtype=np.int64).ravel()
        dst = np.asarray(targets, dtype=np.int64).ravel()
        n = len(original_ids)
        if not (len(tier1) == len(tier2) == n):
            raise GraphBuildError("label arrays must match vertex count")
        if len(src) != len(dst):
            raise GraphBuildError("source and target arrays differ in length")
        if validate:
            if n > 1 and np.any(np.diff(original_ids) <= 0):
                raise GraphBuildError("original ids must be strictly increasing")
            if np.any(tier2 // 10 != tier1):
                bad = int(np.flatnonzero(tier2 // 10 != tier1)[0])
                raise GraphBuildError(
                    f"vertex {original_ids[bad]}: subcategory {tier2[bad]} "
                    f"not in category {tier1[bad]}")
            if len(src) and (src.min() < 0 or dst.min() < 0
                             or src.max() >= n or dst.max() >= n):
                raise GraphBuildError("edge endpoint out of range")
            loops = np.flatnonzero(src == dst)
            if len(loops):
                v = original_ids[src[loops[0]]]
                raise InvalidEdgeError(f"self-loop on vertex {v}")
            keys = src * n + dst
            uniq, counts = np.unique(keys, return_counts=True)
            if len(uniq) != len(keys):
                k = uniq[np.argmax(counts > 1)]
                raise InvalidEdgeError(
                    f"duplicate edge {original_ids[k // n]} -> {original_ids[k % n]}")
        out_indptr, out_indices = _csr(src, dst, n)
        in_indptr, in_indices = _csr(dst, src, n)
        return cls(*map(_frozen, (original_ids, tier1, tier2, src, dst,
                                  out_indptr, out_indices, in_indptr, in_indices)))

    @property
    def vertex_count(self) -> int:
        return len(self.original_ids)

    @property
    def edge_count(self) -> int:
        return len(self.sources)

    def indegree(self) -> np.ndarray:
        return np.diff(self.in_indptr)

    def outdegree(self) -> np.ndarray:
        return np.diff(self.out_indptr)

    def successors(self, v: int) -> np.ndarray:
        return self.out_indices[self.out_indptr[v]:self.out_indptr[v + 1]]

    def predecessors(self, v: int) -> np.ndarray:
        return self.in_indices[self.in_indptr[v]:self.in_indptr[v + 1]]

    def label(self, v: int) -> GroupLabel:
        return GroupLabel(int(self.tier1[v]), int(self.tier2[v]))

    def labels_at(self, tier: int) -> np.ndarray:
        if tier == 1:
            return self.tier1
        if tier == 2:
            return self.tier2
        raise ValueError(f"tier must be 1 or 2, got {tier!r}")

    def index_of(self, original_id) -> int:
        i = int(np.searchsorted(self.original_ids, original_id))
        if i == self.vertex_count or self.original_ids[i] != original_id:
            raise KeyError(original_id)
        return i

    def groups(self, tier: int) -> tuple[int, ...]:
        return tuple(int(g) for g in self._group_index[tier][0])

    def group_mask(self, code: int) -> np.ndarray:
        tier = group_tier(code)
        if code not in self.groups(tier):
            raise KeyError(f"unknown group code {code}")
        return self.labels_at(tier) == code

    def vertices_in(self, code: int) -> np.ndarray:
        tier = group_tier(code)
        codes, members = self._group_index[tier]
        i = int(np.searchsorted(codes, code))
        if i == len(codes) or codes[i] != code:
            raise KeyError(f"unknown group code {code}")
        return members[i]

    @cached_property
    def _group_index(self) -> dict:
        index = {}
        for tier in (1, 2):
            labels = self.labels_at(tier)
            order = np.argsort(labels, kind="stable")
            codes, starts = np.unique(labels[order], return_index=True)
            members = [_frozen(m) for m in np.split(order, starts[1:])] if len(codes) else []
            index[tier] = (codes, members)
        return index

    def edges(self) -> np.ndarray:
        """Edge list as an (m, 2) array of original identifiers."""
        return np.column_stack([self.original_ids[self.sources],
                                self.original_ids[self.targets]])


def build_graph(edge_list: Iterable, labels: Mapping) -> LabeledDigraph:
    """Build a graph from ``(source, target)`` pairs of original ids and a
    mapping original id -> :class:`GroupLabel`. Every labeled id becomes a
    vertex, including ones that touch no edge."""
    ids = np.array(sorted(labels), dtype=np.int64)
    tier1 = np.array([labels[i].tier1 for i in ids.tolist()], dtype=np.int16)
    tier2 = np.array([labels[i].tier2 for i in ids.tolist()], dtype=np.int16)
    pairs = np.asarray(list(edge_list) if not isinstance(edge_list, np.ndarray)
                       else edge_list, dtype=np.int64).reshape(-1, 2)
    flat = pairs.ravel()
    pos = np.searchsorted(ids, flat)
    pos_c = np.minimum(pos, max(len(ids) - 1, 0))
    found = (pos < len(ids)) & (ids[pos_c] == flat) if len(ids) else np.zeros(len(flat), bool)
    if not found.all():
        raise UnlabeledVertexError(int(flat[np.argmin(found)]))
    idx = pos.reshape(-1, 2)
    return LabeledDigraph.from_arrays(idx[:, 0], idx[:, 1], ids, tier1, tier2)


@dataclass(frozen=True, eq=False)
class EdgeMatrix:
    """Edge counts between groups; rows are source groups, columns targets."""

    tier: int
    groups: tuple[int, ...]
    counts: np.ndarray

    def cell(self, source: int, target: int) -> int:
        return int(self.counts[self.groups.index(source), self.groups.index(target)])

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def to_tier1(self) -> "EdgeMatrix":
        """Sum tier-2 cells over the subcategories of each category pair."""
        if self.tier == 1:
            return self
        cats = np.array([g // 10 for g in self.groups])
        outer = tuple(sorted(set(cats.tolist())))
        pos = np.searchsorted(outer, cats)
        agg = np.zeros((len(outer), len(outer)), dtype=np.int64)
        np.add.at(agg, (pos[:, None], pos[None, :]), self.counts)
        return EdgeMatrix(1, outer, _frozen(agg))

    def to_records(self) -> list[dict]:
        return [{"source": g, "target": h, "edges": int(self.counts[i, j])}
                for i, g in enumerate(self.groups) for j, h in enumerate(self.groups)]

    def __eq__(self, other):
        return (isinstance(other, EdgeMatrix) and self.tier == other.tier
                and self.groups == other.groups
                and np.array_equal(self.counts, other.counts))

    __hash__ = None


def edge_matrix(graph: LabeledDigraph, tier: int) -> EdgeMatrix:
    labels = graph.labels_at(tier)
    codes, gi = np.unique(labels, return_inverse=True)
    k = len(codes)
    flat = np.bincount(gi[graph.sources] * k + gi[graph.targets], minlength=k * k)
    return EdgeMatrix(tier, tuple(int(c) for c in codes),
                      _frozen(flat.reshape(k, k).astype(np.int64)))
