"""Pearson correlation between degree vectors.

Moments are accumulated block-wise in one pass over the data and merged
with the pairwise update of Chan, Golub and LeVeque, which keeps the
co-moments accurate for long integer vectors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .decompose import DegreeDecomposition, channel_indegree
from .graph_core import LabeledDigraph

BLOCK = 1 << 16


class PearsonAccumulator:
    """Streaming count, means and (co)moments of two paired sequences."""

    def __init__(self):
        self.n = 0
        self.mean_x = self.mean_y = 0.0
        self.sxx = self.syy = self.sxy = 0.0
        self._x_range = self._y_range = (math.inf, -math.inf)

    def update(self, x, y) -> "PearsonAccumulator":
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.shape != y.shape:
            raise ValueError("paired blocks must have equal length")
        nb = x.size
        if nb == 0:
            return self
        self._x_range = (min(self._x_range[0], x.min()), max(self._x_range[1], x.max()))
        self._y_range = (min(self._y_range[0], y.min()), max(self._y_range[1], y.max()))
        mx, my = x.mean(), y.mean()
        dx, dy = x - mx, y - my
        bxx, byy, bxy = dx @ dx, dy @ dy, dx @ dy
        n = self.n + nb
        ex, ey = mx - self.mean_x, my - self.mean_y
        w = self.n * nb / n
        self.sxx += bxx + ex * ex * w
        self.syy += byy + ey * ey * w
        self.sxy += bxy + ex * ey * w
        self.mean_x += ex * nb / n
        self.mean_y += ey * nb / n
        self.n = n
        return self

    def pcc(self) -> float | None:
        # constancy is checked exactly; rounding can leave sxx slightly positive
        if (self.n < 2 or self._x_range[0] == self._x_range[1]
                or self._y_range[0] == self._y_range[1]):
            return None
        r = self.sxy / math.sqrt(self.sxx * self.syy)
        return min(1.0, max(-1.0, r))


def pearson(x, y) -> float | None:
    """Product-moment correlation of ``x`` and ``y``.

    Returns ``None`` when either vector has zero variance; the coefficient
    is undefined there and must not be mistaken for zero.
    """
    x = np.asarray(x)
    y = np.asarray(y)
    if x.ndim != 1 or x.shape != y.shape:
        raise ValueError(f"vectors must be 1-d and equal length, got {x.shape} and {y.shape}")
    if len(x) < 2:
        raise ValueError("need at least two observations")
    acc = PearsonAccumulator()
    for i in range(0, len(x), BLOCK):
        acc.update(x[i:i + BLOCK], y[i:i + BLOCK])
    return acc.pcc()


@dataclass(frozen=True)
class CorrelationReport:
    label: tuple[str, str]
    pcc: float | None
    n: int

    @property
    def defined(self) -> bool:
        return self.pcc is not None

    def to_dict(self) -> dict:
        return {"a": self.label[0], "b": self.label[1], "n": self.n, "pcc": self.pcc}


def correlation_suite(decomposition: DegreeDecomposition) -> tuple[CorrelationReport, ...]:
    """Global-internal, global-external and internal-external PCCs."""
    d = decomposition
    pairs = (("global", d.global_in, "internal", d.internal_in),
             ("global", d.global_in, "external", d.external_in),
             ("internal", d.internal_in, "external", d.external_in))
    return tuple(CorrelationReport((a, b), pearson(x, y), len(d)) for a, x, b, y in pairs)


def pairwise_channel_correlation(graph: LabeledDigraph, dest_group: int, source_a: int,
                                 source_b: int, scope: int | None = None,
                                 active_only: bool = False,
                                 allow_same: bool = False) -> CorrelationReport:
    """PCC between the indegree a destination group's vertices receive from
    two different source groups.

    All destination vertices enter the vectors; ``active_only`` keeps only
    vertices with at least one in-link from either source.
    """
    if source_a == source_b and not allow_same:
        raise ValueError("source groups must differ")
    if dest_group in (source_a, source_b):
        raise ValueError("source groups must differ from the destination group")
    a = channel_indegree(graph, dest_group, source_a, scope).counts
    b = channel_indegree(graph, dest_group, source_b, scope).counts
    if active_only:
        keep = (a > 0) | (b > 0)
        a, b = a[keep], b[keep]
    label = (f"{source_a}->{dest_group}", f"{source_b}->{dest_group}")
    if len(a) < 2:
        return CorrelationReport(label, None, len(a))
    return CorrelationReport(label, pearson(a, b), len(a))
