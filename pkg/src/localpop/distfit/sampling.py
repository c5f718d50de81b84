"""Inverse-CDF sampling from the discrete families.

The CDF is tabulated from ``xmin`` until the remaining mass drops below
``1e-13`` or the table reaches ``MAX_TABLE`` entries. Draws that land in the
remaining tail of a (truncated) power law are taken from the continuous
Pareto tail, thinned by the exponential cutoff; other families must fit
inside the table.
"""
from __future__ import annotations

import math

import numpy as np

from .families import Family, log_normalizer, log_weight

MAX_TABLE = 1 << 22
TAIL_MASS = 1e-13


def _table(family: Family, params, xmin: int):
    lz = log_normalizer(family, params, xmin)
    size = 4096
    while True:
        x = np.arange(xmin, xmin + size, dtype=float)
        cdf = np.cumsum(np.exp(log_weight(family, x, params) - lz))
        rest = math.exp(log_normalizer(family, params, xmin + size) - lz)
        if rest < TAIL_MASS or size >= MAX_TABLE:
            return cdf, rest
        size *= 4


def sample(family, params, xmin: int, size: int, rng: np.random.Generator) -> np.ndarray:
    family = Family(family)
    params = tuple(float(v) for v in params)
    cdf, rest = _table(family, params, xmin)
    k = xmin + len(cdf)
    u = rng.random(size)
    # tail probability computed directly; 1 - cdf[-1] loses digits
    in_table = u < 1.0 - rest
    out = np.empty(size, dtype=np.int64)
    idx = np.searchsorted(cdf, u[in_table] * (cdf[-1] / (1.0 - rest)), side="right")
    out[in_table] = xmin + np.minimum(idx, len(cdf) - 1)
    m = int((~in_table).sum())
    if m:
        if family not in (Family.PL, Family.TPL) or params[0] <= 1.0:
            raise ValueError(f"{family}{params}: tail mass {rest:.3g} beyond the sampling table")
        out[~in_table] = _pareto_tail(params, k, m, rng, family is Family.TPL)
    return out


def _pareto_tail(params, k: int, m: int, rng, truncated: bool) -> np.ndarray:
    alpha = params[0]
    draws = []
    while m > 0:
        x = (k - 0.5) * (1.0 - rng.random(m)) ** (-1.0 / (alpha - 1.0))
        if truncated:
            x = x[rng.random(len(x)) < np.exp(-params[1] * (x - k))]
        xs = np.round(x)
        xs = xs[(xs >= k) & (xs < 2.0 ** 62)]
        draws.append(xs.astype(np.int64))
        m -= len(xs)
    return np.concatenate(draws)[: sum(len(d) for d in draws) + m]
