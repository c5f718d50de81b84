"""Discrete heavy-tailed families on the integers ``x >= xmin``.

Each family is an unnormalized weight ``w(x; theta)``; the pmf is
``w(x) / Z`` with ``Z = sum_{x >= xmin} w(x)``. ``Z`` is summed exactly over
the first ``HEAD`` integers and the remainder is taken from the closed-form
tail integral with Euler-Maclaurin end corrections. PL uses the Hurwitz
zeta function and EXP the geometric series directly.
"""
from __future__ import annotations

import enum
import math

import numpy as np
from scipy.special import hyperu, log_ndtr, zeta

HEAD = 1024
_LOG_SQRT_2PI = 0.5 * math.log(2 * math.pi)


class Family(str, enum.Enum):
    PL = "PL"
    TPL = "TPL"
    EXP = "EXP"
    SE = "SE"
    LN = "LN"
    LNP = "LNP"

    @property
    def param_names(self) -> tuple[str, ...]:
        return PARAM_NAMES[self]

    def __str__(self):
        return self.value


PARAM_NAMES = {
    Family.PL: ("alpha",),
    Family.TPL: ("alpha", "lambda"),
    Family.EXP: ("lambda",),
    Family.SE: ("lambda", "beta"),
    Family.LN: ("mu", "sigma"),
    Family.LNP: ("mu", "sigma"),
}

# (simpler, richer) pairs where the simpler family is a special case
NESTED = {
    frozenset((Family.PL, Family.TPL)),
    frozenset((Family.EXP, Family.SE)),
    frozenset((Family.LN, Family.LNP)),
}


def is_nested(a: Family, b: Family) -> bool:
    return frozenset((a, b)) in NESTED


def valid_params(family: Family, p) -> bool:
    if not all(math.isfinite(v) for v in p):
        return False
    if family is Family.PL:
        return p[0] > 1.0
    if family is Family.TPL:
        return p[1] > 0.0
    if family is Family.EXP:
        return p[0] > 0.0
    if family is Family.SE:
        return p[0] > 0.0 and p[1] > 0.0
    if family is Family.LN:
        return p[1] > 0.0
    return p[0] >= 0.0 and p[1] > 0.0


def log_weight(family: Family, x, p) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    lx = np.log(x)
    if family is Family.PL:
        return -p[0] * lx
    if family is Family.TPL:
        return -p[0] * lx - p[1] * x
    if family is Family.EXP:
        return -p[0] * x
    if family is Family.SE:
        # constant factor e^-lambda dropped: keeps lambda * x^beta accurate
        # in the power-law limit (beta -> 0, lambda -> inf)
        lam, beta = p
        return (beta - 1.0) * lx - lam * np.expm1(beta * lx)
    mu, sigma = p
    return -lx - (lx - mu) ** 2 / (2.0 * sigma * sigma)


def _dlog_weight(family: Family, x: float, p) -> float:
    if family is Family.TPL:
        return -p[0] / x - p[1]
    if family is Family.SE:
        lam, beta = p
        return (beta - 1.0) / x - lam * beta * x ** (beta - 1.0)
    mu, sigma = p
    return -1.0 / x - (math.log(x) - mu) / (sigma * sigma * x)


def log_upper_gamma(a: float, z: float) -> float:
    """log Gamma(a, z) for real ``a`` and ``z > 0``.

    Legendre continued fraction (modified Lentz) for ``z >= 1``; below that
    the confluent hypergeometric form ``Gamma(a, z) = e^-z U(1-a, 1-a, z)``.
    """
    if z < 1.0:
        u = float(hyperu(1.0 - a, 1.0 - a, z))
        return -z + math.log(u) if u > 0.0 and math.isfinite(u) else math.inf
    tiny = 1e-300
    b = z + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b if abs(b) > tiny else 1.0 / tiny
    h = d
    for i in range(1, 1000):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-15:
            break
    return -z + a * math.log(z) + math.log(h)


def _log_tail_integral(family: Family, k: float, p) -> float:
    """log of the integral of w over [k, inf)."""
    if family is Family.TPL:
        alpha, lam = p
        return (alpha - 1.0) * math.log(lam) + log_upper_gamma(1.0 - alpha, lam * k)
    if family is Family.SE:
        lam, beta = p
        return -lam * math.expm1(beta * math.log(k)) - math.log(lam * beta)
    mu, sigma = p
    return math.log(sigma) + _LOG_SQRT_2PI + float(log_ndtr(-(math.log(k) - mu) / sigma))


_grids: dict[int, np.ndarray] = {}


def _head(xmin: int) -> np.ndarray:
    g = _grids.get(xmin)
    if g is None:
        if len(_grids) > 256:
            _grids.clear()
        g = _grids[xmin] = np.arange(xmin, xmin + HEAD, dtype=float)
    return g


def log_normalizer(family: Family, p, xmin: int) -> float:
    """log Z where Z sums the weight over all integers >= xmin."""
    xmin = int(xmin)
    if family is Family.PL:
        z = float(zeta(p[0], xmin))
        return math.log(z) if z > 0.0 and math.isfinite(z) else math.inf
    if family is Family.EXP:
        lam = p[0]
        return -lam * xmin - math.log(-math.expm1(-lam))
    lw = log_weight(family, _head(xmin), p)
    k = float(xmin + HEAD)
    lwk = float(log_weight(family, k, p))
    li = _log_tail_integral(family, k, p)
    if not math.isfinite(li) and li > 0:
        return math.inf
    m = max(float(lw.max()), lwk, li)
    if not math.isfinite(m):
        return math.inf if m > 0 else -math.inf
    s = (np.exp(lw - m).sum() + math.exp(li - m)
         + math.exp(lwk - m) * (0.5 - _dlog_weight(family, k, p) / 12.0))
    return m + math.log(s) if s > 0 else -math.inf


def log_pmf(family: Family, x, p, xmin: int) -> np.ndarray:
    return log_weight(family, x, p) - log_normalizer(family, p, xmin)


def log_survival(family: Family, x, p, xmin: int) -> np.ndarray:
    """log P(X >= x) for integer x >= xmin."""
    lz = log_normalizer(family, p, xmin)
    xs = np.atleast_1d(np.asarray(x, dtype=np.int64))
    if family is Family.PL:
        return np.log(zeta(p[0], xs.astype(float))) - lz
    if family is Family.EXP:
        return -p[0] * (xs - xmin).astype(float)
    return np.array([log_normalizer(family, p, int(v)) for v in xs]) - lz


def cdf_on_grid(family: Family, p, xmin: int, xmax: int) -> np.ndarray:
    """P(X <= x) for x = xmin..xmax by cumulative summation."""
    x = np.arange(xmin, xmax + 1, dtype=float)
    return np.minimum(np.cumsum(np.exp(log_pmf(family, x, p, xmin))), 1.0)
