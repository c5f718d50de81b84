"""Internal/external and per-source-group splits of vertex indegree."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

from .graph_core import LabeledDigraph
from .hierarchy import group_tier


@dataclass(frozen=True, eq=False)
class DegreeDecomposition:
    """Indegree split for the vertices of a scope.

    ``vertices`` are graph vertex ids, ``groups`` their group code at
    ``tier``. With ``scope`` set (tier 2 only) only edges whose endpoints
    both lie in that category are counted.
    """

    tier: int
    scope: int | None
    vertices: np.ndarray
    groups: np.ndarray
    global_in: np.ndarray
    internal_in: np.ndarray
    external_in: np.ndarray

    def __len__(self):
        return len(self.vertices)

    def restrict(self, group: int) -> "DegreeDecomposition":
        """Vertices of one group only."""
        keep = self.groups == group
        if not keep.any():
            raise KeyError(f"group {group} has no vertices in this decomposition")
        return DegreeDecomposition(self.tier, self.scope, self.vertices[keep], self.groups[keep],
                                   self.global_in[keep], self.internal_in[keep],
                                   self.external_in[keep])

    def to_frame(self, graph: LabeledDigraph | None = None) -> pd.DataFrame:
        vid = graph.original_ids[self.vertices] if graph is not None else self.vertices
        return pd.DataFrame({"vertex": vid, "group": self.groups, "global": self.global_in,
                             "internal": self.internal_in, "external": self.external_in})


def _scope_edges(graph: LabeledDigraph, scope: int | None):
    src, dst = graph.sources, graph.targets
    if scope is None:
        return src, dst
    inside = graph.tier1[src] == scope
    inside &= graph.tier1[dst] == scope
    return src[inside], dst[inside]


def decompose_indegree(graph: LabeledDigraph, tier: int, scope: int | None = None) -> DegreeDecomposition:
    if tier not in (1, 2):
        raise ValueError(f"tier must be 1 or 2, got {tier!r}")
    if scope is not None:
        if tier != 2:
            raise ValueError("a category scope only applies to tier-2 analysis")
        vertices = graph.vertices_in(scope) if scope in graph.groups(1) else np.empty(0, np.int64)
    else:
        vertices = np.arange(graph.vertex_count)
    if len(vertices) == 0:
        raise ValueError(f"scope {scope!r} contains no vertices")
    labels = graph.labels_at(tier)
    src, dst = _scope_edges(graph, scope)
    n = graph.vertex_count
    glob = np.bincount(dst, minlength=n)
    internal = np.bincount(dst[labels[src] == labels[dst]], minlength=n)
    return DegreeDecomposition(tier, scope, vertices, labels[vertices], glob[vertices],
                               internal[vertices], (glob - internal)[vertices])


@dataclass(frozen=True, eq=False)
class ChannelVector:
    dest_group: int
    source_group: int
    vertices: np.ndarray
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def channel_indegree(graph: LabeledDigraph, dest_group: int, source_group: int,
                     scope: int | None = None) -> ChannelVector:
    """Indegree of each vertex of ``dest_group`` counting only edges that
    originate in ``source_group``. Either group may be a category or a
    subcategory code, which allows across-tier channels."""
    dest_tier = group_tier(dest_group)
    src_tier = group_tier(source_group)
    if scope is not None:
        for g in (dest_group, source_group):
            if (g if group_tier(g) == 1 else g // 10) != scope:
                raise ValueError(f"group {g} lies outside scope category {scope}")
    vertices = graph.vertices_in(dest_group)
    graph.vertices_in(source_group)  # validates the code
    from_src = graph.labels_at(src_tier)[graph.sources] == source_group
    into_dst = graph.labels_at(dest_tier)[graph.targets] == dest_group
    hits = graph.targets[from_src & into_dst]
    counts = np.bincount(hits, minlength=graph.vertex_count)[vertices]
    return ChannelVector(dest_group, source_group, vertices, counts)


def externally_popular_fraction(decomposition: DegreeDecomposition) -> float:
    """Share of vertices with at least one in-link from another group."""
    if len(decomposition) == 0:
        return 0.0
    return float(np.count_nonzero(decomposition.external_in >= 1) / len(decomposition))
