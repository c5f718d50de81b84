"""Synthetic labeled digraphs from a target edge matrix by local
preferential attachment.

Vertices arrive one at a time; the arrival sequence is a uniform random
interleaving of the groups (equivalently, each next arrival's group is
drawn in proportion to the group's remaining quota). Each target matrix
cell ``E[g][h]`` is split across the arrivals of ``g`` as evenly as
possible, with the remainder given to randomly chosen arrivals. An
arriving ``g`` vertex picks each ``h`` target among earlier ``h`` arrivals
with probability proportional to ``c_gh(v) + a``, where ``c_gh`` counts only
edges of channel ``g -> h``. Every channel keeps its own popularity ranking.

With ``window`` set, only targets that arrived within the last
``ceil(window * N)`` arrivals are citable. The finite citable lifetime
cuts off each vertex's growth, which is what gives internal indegrees a
truncated power-law shape; without it the oldest vertices of every group
lead on every channel at once, channels correlate through vertex age, and
internal indegrees come out closer to lognormal.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .graph_core import LabeledDigraph
from .hierarchy import CATEGORY_SIZES, GroupLabel, subcategories_of

MAX_REJECTIONS = 100


class InfeasibleMatrixError(ValueError):
    def __init__(self, source: GroupLabel, target: GroupLabel, demand: int, capacity: int,
                 tier: int):
        super().__init__(
            f"cell ({source.at(tier)} -> {target.at(tier)}) needs {demand} edges but "
            f"only {capacity} can be placed")
        self.cell = (source.at(tier), target.at(tier))
        self.demand = demand
        self.capacity = capacity


def _default_label(code: int, tier: int) -> GroupLabel:
    if tier == 2:
        return GroupLabel.from_subcategory(code)
    subs = subcategories_of(code)
    return GroupLabel(code, subs[0] if subs else code * 10 + 1)


@dataclass(frozen=True, eq=False)
class GeneratorConfig:
    groups: tuple[GroupLabel, ...]
    sizes: tuple[int, ...]
    matrix: np.ndarray
    tier: int = 1
    smoothing: float = 1.0
    seed: int = 0
    arrival: str = "interleaved"
    window: float | None = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.int64)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "groups", tuple(self.groups))
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        k = len(self.groups)
        if len(self.sizes) != k or m.shape != (k, k):
            raise ValueError("groups, sizes and matrix dimensions disagree")
        codes = [g.at(self.tier) for g in self.groups]
        if len(set(codes)) != k:
            raise ValueError(f"group codes must be distinct at tier {self.tier}")
        if (m < 0).any():
            raise ValueError("edge counts must be non-negative")
        if any(s < 0 for s in self.sizes):
            raise ValueError("group sizes must be non-negative")
        if not self.smoothing > 0:
            raise ValueError("attachment smoothing must be positive")
        if self.arrival not in ("interleaved", "grouped"):
            raise ValueError(f"unknown arrival policy {self.arrival!r}")
        if self.window is not None and not 0 < self.window <= 1:
            raise ValueError("window must be a fraction in (0, 1]")

    @property
    def window_arrivals(self) -> int | None:
        """Citable age limit in arrivals, or None for unlimited."""
        if self.window is None:
            return None
        return max(1, int(np.ceil(self.window * self.vertex_count)))

    @property
    def vertex_count(self) -> int:
        return sum(self.sizes)

    @classmethod
    def from_dict(cls, d: dict) -> "GeneratorConfig":
        tier = int(d.get("tier", 1))
        groups = tuple(GroupLabel(*g) if isinstance(g, (list, tuple)) else _default_label(int(g), tier)
                       for g in d["groups"])
        return cls(groups, tuple(d["sizes"]), np.array(d["matrix"], dtype=np.int64), tier,
                   float(d.get("smoothing", 1.0)), int(d.get("seed", 0)),
                   d.get("arrival", "interleaved"), d.get("window"))

    @classmethod
    def load(cls, path) -> "GeneratorConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_dict(self) -> dict:
        return {"tier": self.tier, "groups": [[g.tier1, g.tier2] for g in self.groups],
                "sizes": list(self.sizes), "matrix": self.matrix.tolist(),
                "smoothing": self.smoothing, "seed": self.seed, "arrival": self.arrival,
                "window": self.window}


class _Uniforms:
    """Buffered draws from one generator, so a single seeded stream feeds everything."""

    def __init__(self, rng: np.random.Generator, block: int = 1 << 16):
        self.rng, self.block = rng, block
        self.buf, self.i = rng.random(block).tolist(), 0

    def next(self) -> float:
        if self.i == self.block:
            self.buf, self.i = self.rng.random(self.block).tolist(), 0
        u = self.buf[self.i]
        self.i += 1
        return u


def _split_quota(total: int, n: int, rng: np.random.Generator) -> np.ndarray:
    q = np.full(n, total // n if n else 0, dtype=np.int64)
    extra = total - int(q.sum())
    if extra:
        q[rng.choice(n, size=extra, replace=False)] += 1
    return q


@dataclass(eq=False)
class LocalAttachmentGenerator:
    """One generation run. After :meth:`run`, ``channel_targets[(g, h)]``
    lists the target of every ``g -> h`` edge; its histogram is the channel
    popularity counter the sampler used."""

    config: GeneratorConfig
    channel_targets: dict = field(default_factory=dict)
    arrival_groups: np.ndarray | None = None

    def _arrivals(self, rng) -> np.ndarray:
        seq = np.repeat(np.arange(len(self.config.groups)), self.config.sizes)
        return rng.permutation(seq) if self.config.arrival == "interleaved" else seq

    def capacities(self, order: np.ndarray) -> np.ndarray:
        """Most ``g -> h`` edges a simple graph can hold when edges only
        point to earlier arrivals inside the citable window."""
        k = len(self.config.groups)
        w = self.config.window_arrivals
        t = np.arange(len(order))
        cap = np.zeros((k, k), dtype=np.int64)
        for h in range(k):
            cum = np.concatenate([[0], np.cumsum(order == h)])
            avail = cum[t] - (cum[np.maximum(t - w, 0)] if w is not None else 0)
            cap[:, h] = np.bincount(order, weights=avail, minlength=k).astype(np.int64)
        return cap

    def run(self) -> LabeledDigraph:
        cfg = self.config
        k = len(cfg.groups)
        rng = np.random.default_rng(cfg.seed)
        order = self._arrivals(rng)
        self.arrival_groups = order
        cap = self.capacities(order)
        over = np.argwhere(cfg.matrix > cap)
        if len(over):
            g, h = over[0]
            raise InfeasibleMatrixError(cfg.groups[g], cfg.groups[h], int(cfg.matrix[g, h]),
                                        int(cap[g, h]), cfg.tier)
        positions = [np.flatnonzero(order == g) for g in range(k)]
        quota = {(g, h): _split_quota(int(cfg.matrix[g, h]), len(positions[g]), rng)
                 for g in range(k) for h in range(k) if cfg.matrix[g, h] > 0}
        out_channels = [[h for h in range(k) if (g, h) in quota] for g in range(k)]
        rank = np.zeros(len(order), dtype=np.int64)
        for g in range(k):
            rank[positions[g]] = np.arange(len(positions[g]))

        uni = _Uniforms(rng)
        a = cfg.smoothing
        w = cfg.window_arrivals
        start = [0] * k
        members: list[list[int]] = [[] for _ in range(k)]
        targets = {c: [] for c in quota}  # sampling lists, compacted under a window
        edges_of = {c: [] for c in quota}
        backlog = dict.fromkeys(quota, 0)
        src_out: list[int] = []
        dst_out: list[int] = []
        for t, g in enumerate(order.tolist()):
            r = int(rank[t])
            for h in out_channels[g]:
                c = (g, h)
                need = int(quota[c][r]) + backlog[c]
                if need == 0:
                    continue
                pool = members[h]
                if w is not None:
                    lo = start[h]
                    while lo < len(pool) and pool[lo] < t - w:
                        lo += 1
                    start[h] = lo
                else:
                    lo = 0
                m = len(pool) - lo
                if m == 0:
                    backlog[c] = need
                    continue
                chosen = self._draw(targets[c], pool, lo, min(need, m), a, uni,
                                    t - w if w is not None else None)
                backlog[c] = need - len(chosen)
                targets[c].extend(chosen)
                edges_of[c].extend(chosen)
                src_out.extend([t] * len(chosen))
                dst_out.extend(chosen)
            members[g].append(t)
        left = [(c, n) for c, n in backlog.items() if n > 0]
        if left:
            (g, h), n = left[0]
            raise InfeasibleMatrixError(cfg.groups[g], cfg.groups[h], int(cfg.matrix[g, h]),
                                        int(cfg.matrix[g, h]) - n, cfg.tier)
        self.channel_targets = edges_of
        labels = [cfg.groups[g] for g in order.tolist()]
        return LabeledDigraph.from_arrays(
            np.array(src_out, dtype=np.int64), np.array(dst_out, dtype=np.int64),
            np.arange(len(order), dtype=np.int64),
            np.array([lab.tier1 for lab in labels], dtype=np.int16),
            np.array([lab.tier2 for lab in labels], dtype=np.int16),
            validate=False)

    @staticmethod
    def _draw(hits: list, pool: list, lo: int, want: int, a: float, uni: _Uniforms,
              cutoff: int | None) -> list:
        """Up to ``want`` distinct vertices from ``pool[lo:]``, each with
        weight (channel hits + a).

        ``hits`` has one entry per earlier channel edge, so a uniform pick
        from it is a pick proportional to hit count. Picks of vertices older
        than ``cutoff`` restart the whole draw, which leaves the accepted
        picks distributed by weight over the window; the hit list is
        compacted when such restarts pile up.
        """
        m = len(pool) - lo
        if want == m:
            return pool[lo:]
        chosen: list[int] = []
        seen: set[int] = set()
        rejections = stale = 0
        while len(chosen) < want and rejections < MAX_REJECTIONS:
            s = len(hits)
            if uni.next() * (s + a * m) < s:
                v = hits[int(uni.next() * s)]
                if cutoff is not None and v < cutoff:
                    stale += 1
                    if stale >= 16:
                        hits[:] = [x for x in hits if x >= cutoff]
                        stale = 0
                    continue
            else:
                v = pool[lo + int(uni.next() * m)]
            if v in seen:
                rejections += 1
                continue
            seen.add(v)
            chosen.append(v)
        return chosen

    def channel_counts(self, vertex_count: int) -> dict:
        return {c: np.bincount(np.asarray(t, dtype=np.int64), minlength=vertex_count)
                for c, t in self.channel_targets.items()}


def generate(config: GeneratorConfig) -> LabeledDigraph:
    return LocalAttachmentGenerator(config).run()


def uspcn_like_config(scale: float = 0.05, mean_outdegree: float = 6.2,
                      internal_share: float = 0.93, smoothing: float = 0.5,
                      window: float | None = 0.01, seed: int = 0) -> GeneratorConfig:
    """Six categories sized like the USPCN (scaled), with an edge matrix
    whose diagonal dominates: each category sends ``internal_share`` of its
    citations internally and spreads the rest over the others by size.

    The defaults for ``smoothing`` and ``window`` were calibrated so that
    channel popularity stays decorrelated (see scripts/generator_locality.py).
    """
    cats = sorted(CATEGORY_SIZES)
    sizes = np.array([max(1, round(CATEGORY_SIZES[c] * scale)) for c in cats])
    out = sizes * mean_outdegree
    k = len(cats)
    m = np.zeros((k, k))
    for g in range(k):
        others = np.array([sizes[h] if h != g else 0 for h in range(k)], dtype=float)
        m[g] = (1 - internal_share) * out[g] * others / others.sum()
        m[g, g] = internal_share * out[g]
    matrix = np.rint(m).astype(np.int64)
    return GeneratorConfig(tuple(_default_label(c, 1) for c in cats), tuple(int(s) for s in sizes),
                           matrix, 1, smoothing, seed, window=window)
