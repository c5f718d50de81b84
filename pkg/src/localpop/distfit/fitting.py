"""Maximum-likelihood fits of the discrete families and likelihood-ratio
model comparison."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import minimize, minimize_scalar
from scipy.special import erfc
from scipy.stats import chi2

from .families import (Family, cdf_on_grid, is_nested, log_normalizer, log_survival,
                       log_weight, valid_params)

ALL_FAMILIES = tuple(Family)
MIN_TAIL = 50
_GRID_LIMIT = 1 << 21


class FitError(RuntimeError):
    pass


class InsufficientDataError(FitError):
    def __init__(self, n: int, xmin: int, needed: int):
        super().__init__(f"only {n} samples >= xmin={xmin}; need at least {needed}")
        self.n, self.xmin, self.needed = n, xmin, needed


class ConvergenceError(FitError):
    pass


@dataclass(frozen=True)
class XminPolicy:
    """``fixed`` uses ``value``; ``ks`` picks the candidate lower cutoff
    minimizing the KS distance of a power-law fit to the tail."""

    kind: str = "fixed"
    value: int = 1
    min_tail: int = MIN_TAIL

    def __post_init__(self):
        if self.kind not in ("fixed", "ks"):
            raise ValueError(f"unknown xmin policy {self.kind!r}")
        if self.value < 1:
            raise ValueError("xmin must be a positive integer")


@dataclass(frozen=True, eq=False)
class TailSample:
    """Integer samples >= xmin stored as distinct values with multiplicities."""

    xmin: int
    values: np.ndarray
    counts: np.ndarray

    @classmethod
    def from_samples(cls, samples, xmin: int) -> "TailSample":
        x = np.asarray(samples)
        if x.size and not np.issubdtype(x.dtype, np.integer):
            if np.any(x != np.round(x)):
                raise ValueError("samples must be integers")
            x = x.astype(np.int64)
        x = x[x >= xmin]
        values, counts = np.unique(x, return_counts=True)
        return cls(int(xmin), values.astype(np.int64), counts.astype(np.int64))

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    def expand(self) -> np.ndarray:
        return np.repeat(self.values, self.counts)


@dataclass(frozen=True)
class FitResult:
    family: Family
    xmin: int
    params: tuple[float, ...]
    log_likelihood: float
    tail_sample_size: int
    ks_distance: float
    evaluations: int = 0

    @property
    def param_dict(self) -> dict[str, float]:
        return dict(zip(self.family.param_names, self.params))

    def log_pmf(self, x) -> np.ndarray:
        return log_weight(self.family, x, self.params) - log_normalizer(self.family, self.params, self.xmin)

    def ccdf(self, x) -> np.ndarray:
        """P(X >= x) under the fit."""
        return np.exp(log_survival(self.family, x, self.params, self.xmin))

    def to_dict(self) -> dict:
        return {"family": self.family.value, "xmin": self.xmin, "params": self.param_dict,
                "log_likelihood": self.log_likelihood, "n": self.tail_sample_size,
                "ks_distance": self.ks_distance}


def _mean_nll(family: Family, tail: TailSample, p) -> float:
    if not valid_params(family, p):
        return math.inf
    lz = log_normalizer(family, p, tail.xmin)
    if not math.isfinite(lz):
        return math.inf
    lw = log_weight(family, tail.values, p)
    return lz - float(tail.counts @ lw) / tail.n


def _ks_distance(family: Family, p, tail: TailSample) -> float:
    """Sup distance between the empirical and fitted CDFs on the tail.

    Both CDFs are step functions on the integers. Between consecutive
    observed values the empirical CDF is flat while the fitted one rises,
    so only ``u`` and ``u - 1`` for observed ``u`` need checking.
    """
    emp = np.cumsum(tail.counts) / tail.n
    emp_before = np.concatenate([[0.0], emp[:-1]])
    u = tail.values
    if u[-1] - tail.xmin < _GRID_LIMIT:
        grid = cdf_on_grid(family, p, tail.xmin, int(u[-1]))
        fit_at = grid[u - tail.xmin]
        fit_before = np.where(u > tail.xmin, grid[np.maximum(u - 1 - tail.xmin, 0)], 0.0)
    else:
        fit_before = -np.expm1(log_survival(family, p=p, x=u, xmin=tail.xmin))
        fit_at = -np.expm1(log_survival(family, p=p, x=u + 1, xmin=tail.xmin))
    d = max(np.abs(emp - fit_at).max(), np.abs(emp_before - fit_before).max())
    return float(min(max(d, 0.0), 1.0))


def _pl_start(tail: TailSample) -> float:
    x = tail.expand().astype(float)
    return 1.0 + len(x) / max(np.log(x / (tail.xmin - 0.5)).sum(), 1e-12)


def _nelder_mead(obj, starts: Sequence[Sequence[float]]):
    best, nfev = None, 0
    opts = {"xatol": 1e-8, "fatol": 1e-12, "maxiter": 5000, "maxfev": 10000}
    for s in starts:
        r = minimize(obj, np.asarray(s, float), method="Nelder-Mead", options=opts)
        nfev += r.nfev
        if best is None or r.fun < best.fun:
            best = r
    if best is None or not math.isfinite(best.fun):
        return best, nfev
    # restart from the optimum; a collapsed simplex can stop short
    r = minimize(obj, best.x, method="Nelder-Mead", options=opts)
    nfev += r.nfev
    return (r if r.fun <= best.fun else best), nfev


def _fit_tail(tail: TailSample, family: Family, rng: np.random.Generator):
    """Return (params, mean nll, evaluations)."""
    x = tail.values.astype(float)
    w = tail.counts / tail.n
    mean = float(w @ x)
    lx = np.log(x)
    lmean = float(w @ lx)
    lsd = max(math.sqrt(max(float(w @ (lx - lmean) ** 2), 0.0)), 0.05)
    jitter = lambda: rng.normal(0.0, 0.1)  # noqa: E731

    if family is Family.PL:
        r = minimize_scalar(lambda a: _mean_nll(family, tail, (a,)), bounds=(1.0 + 1e-7, 50.0),
                            method="bounded", options={"xatol": 1e-10, "maxiter": 500})
        return (float(r.x),), float(r.fun), int(r.nfev)

    if family is Family.EXP:
        # geometric MLE on x - xmin
        excess = mean - tail.xmin
        lam = math.log1p(1.0 / excess)
        return (lam,), _mean_nll(family, tail, (lam,)), 1

    if family is Family.TPL:
        a0 = _pl_start(tail)
        l0 = math.log(1.0 / mean)

        def obj(t):
            return _mean_nll(family, tail, (t[0], math.exp(max(t[1], -40.0))))
        starts = [(a0, l0), (max(a0 - 1.0, 0.5) + jitter(), l0 + 1.0 + jitter()),
                  (1.0 + jitter(), l0 - 2.0 + jitter())]
        r, nfev = _nelder_mead(obj, starts)
        return (float(r.x[0]), math.exp(max(r.x[1], -40.0))), float(r.fun), nfev

    if family is Family.SE:
        def obj(t):
            return _mean_nll(family, tail, (math.exp(t[0]), math.exp(t[1])))
        starts = []
        for beta in (0.3, 0.7, 1.0):
            b = beta * math.exp(jitter())
            starts.append((-b * math.log(mean) + jitter(), math.log(b)))
        r, nfev = _nelder_mead(obj, starts)
        return (math.exp(r.x[0]), math.exp(r.x[1])), float(r.fun), nfev

    def obj(t):
        return _mean_nll(Family.LN, tail, (t[0], math.exp(t[1])))
    starts = [(lmean, math.log(lsd)), (lmean - 1.0 + jitter(), math.log(lsd * 1.5)),
              (lmean + 0.5 + jitter(), math.log(lsd * 0.7))]
    if family is Family.LN:
        r, nfev = _nelder_mead(obj, starts)
        return (float(r.x[0]), math.exp(r.x[1])), float(r.fun), nfev

    # LNP: the unconstrained optimum if it is feasible, else the mu = 0 edge
    r, nfev = _nelder_mead(lambda t: obj((t[0], t[1])) if t[0] >= 0 else math.inf,
                           [(max(s[0], 0.05), s[1]) for s in starts])
    edge = minimize_scalar(lambda ls: obj((0.0, ls)), bounds=(math.log(1e-3), math.log(1e3)),
                           method="bounded", options={"xatol": 1e-10, "maxiter": 500})
    nfev += edge.nfev
    if r is None or edge.fun < r.fun:
        return (0.0, math.exp(edge.x)), float(edge.fun), nfev
    return (float(r.x[0]), math.exp(r.x[1])), float(r.fun), nfev


def fit_tail(tail: TailSample, family: Family, seed: int = 0, min_tail: int = MIN_TAIL) -> FitResult:
    family = Family(family)
    if tail.n < min_tail:
        raise InsufficientDataError(tail.n, tail.xmin, min_tail)
    if len(tail.values) < 2:
        raise ConvergenceError(
            f"{family}: degenerate sample, all {tail.n} tail values equal {tail.values[0]}")
    if len(tail.values) <= len(family.param_names):
        # the likelihood supremum lies at infinity along a ridge of exact fits
        raise ConvergenceError(
            f"{family}: {len(tail.values)} distinct tail values cannot identify "
            f"{len(family.param_names)} parameters")
    rng = np.random.default_rng(seed)
    params, nll, nfev = _fit_tail(tail, family, rng)
    ll = -nll * tail.n
    if not (valid_params(family, params) and math.isfinite(ll)):
        raise ConvergenceError(f"{family}: no finite optimum (params={params}, "
                               f"loglik={ll}, evaluations={nfev})")
    return FitResult(family, tail.xmin, tuple(float(v) for v in params), float(ll), tail.n,
                     _ks_distance(family, params, tail), nfev)


def choose_xmin(samples, policy: XminPolicy = XminPolicy()) -> int:
    if policy.kind == "fixed":
        return policy.value
    x = np.asarray(samples)
    x = x[x >= policy.value]
    values = np.unique(x)
    best, best_d = None, math.inf
    for u in values:
        tail = TailSample.from_samples(x, int(u))
        if tail.n < policy.min_tail:
            break
        if len(tail.values) < 2:
            continue
        d = fit_tail(tail, Family.PL, min_tail=policy.min_tail).ks_distance
        if d < best_d:
            best, best_d = int(u), d
    if best is None:
        raise InsufficientDataError(len(x), policy.value, policy.min_tail)
    return best


def _resolve_tail(samples, xmin) -> tuple[TailSample, int]:
    if isinstance(samples, TailSample):
        return samples, MIN_TAIL
    policy = xmin if isinstance(xmin, XminPolicy) else XminPolicy("fixed", int(xmin))
    return TailSample.from_samples(samples, choose_xmin(samples, policy)), policy.min_tail


def fit(samples, family, xmin: int | XminPolicy = 1, seed: int = 0) -> FitResult:
    """Fit one family to the samples ``>= xmin`` by maximum likelihood.

    Zeros and anything below ``xmin`` are dropped before fitting.
    """
    tail, min_tail = _resolve_tail(samples, xmin)
    return fit_tail(tail, Family(family), seed=seed, min_tail=min_tail)


def _pointwise(fit_: FitResult, tail: TailSample) -> np.ndarray:
    return fit_.log_pmf(tail.values)


def loglikelihood_ratio(tail: TailSample, fa: FitResult, fb: FitResult,
                        nested: bool | None = None) -> tuple[float, float]:
    """Normalized log-likelihood ratio of ``fa`` over ``fb`` and its p-value.

    ``R = sum(d) / (sqrt(n) * sd(d))`` with ``d`` the pointwise log-likelihood
    differences. Non-nested pairs get the two-sided normal p-value of R.
    Nested pairs get the chi-square(1) p-value of ``2 * sum(d)``, since R is
    not asymptotically normal when one family contains the other.
    """
    if fa.xmin != tail.xmin or fb.xmin != tail.xmin:
        raise ValueError("both fits must use the tail sample's xmin")
    if nested is None:
        nested = is_nested(fa.family, fb.family)
    d = _pointwise(fa, tail) - _pointwise(fb, tail)
    n = tail.n
    w = tail.counts
    total = float(w @ d)
    mean = total / n
    var = float(w @ (d - mean) ** 2) / n
    if var <= 0.0 or not math.isfinite(var):
        if total == 0.0 or fa.family == fb.family and fa.params == fb.params:
            return 0.0, 1.0
        return math.copysign(math.inf, total), 0.0
    sd = math.sqrt(var)
    r = total / (math.sqrt(n) * sd)
    if nested:
        p = float(chi2.sf(abs(2.0 * total), 1))
    else:
        p = float(erfc(abs(total) / (math.sqrt(2.0 * n) * sd)))
    return r, p


def compare(samples, family_a, family_b, xmin: int | XminPolicy = 1,
            fits: dict | None = None, seed: int = 0) -> tuple[float, float]:
    """Compare two families fitted on the same tail. Positive R favors
    ``family_a``."""
    tail, min_tail = _resolve_tail(samples, xmin)
    fa_, fb_ = Family(family_a), Family(family_b)
    fits = dict(fits or {})
    for f in (fa_, fb_):
        if f not in fits:
            fits[f] = fit_tail(tail, f, seed=seed, min_tail=min_tail)
    if fa_ is fb_:
        return 0.0, 1.0
    return loglikelihood_ratio(tail, fits[fa_], fits[fb_])


@dataclass(frozen=True)
class BestFitSet:
    families: tuple[Family, ...]
    threshold: float
    xmin: int
    n: int
    fits: dict = field(default_factory=dict)
    comparisons: dict = field(default_factory=dict)
    failures: dict = field(default_factory=dict)

    def __contains__(self, family) -> bool:
        return Family(family) in self.families

    @property
    def label(self) -> str:
        return ", ".join(f.value for f in self.families)

    def to_dict(self) -> dict:
        return {
            "best": [f.value for f in self.families],
            "threshold": self.threshold,
            "xmin": self.xmin,
            "n": self.n,
            "fits": {f.value: r.to_dict() for f, r in self.fits.items()},
            "comparisons": [{"a": a.value, "b": b.value, "R": r, "p": p}
                            for (a, b), (r, p) in self.comparisons.items()],
            "failures": {f.value: msg for f, msg in self.failures.items()},
        }


def select_best(samples, significance_threshold: float = 0.1, xmin: int | XminPolicy = 1,
                families: Iterable = ALL_FAMILIES, seed: int = 0) -> BestFitSet:
    """Families that no competitor beats significantly.

    A family is dropped when some other family has a higher likelihood
    with p below the threshold; everything left is statistically tied.
    Families whose fit fails are reported in ``failures``.
    """
    tail, min_tail = _resolve_tail(samples, xmin)
    families = tuple(Family(f) for f in families)
    if tail.n < min_tail:
        raise InsufficientDataError(tail.n, tail.xmin, min_tail)
    if len(tail.values) < 2:
        raise ConvergenceError(f"degenerate sample, all {tail.n} tail values equal {tail.values[0]}")
    fits, failures = {}, {}
    for f in families:
        try:
            fits[f] = fit_tail(tail, f, seed=seed, min_tail=min_tail)
        except FitError as exc:
            failures[f] = f"{type(exc).__name__}: {exc}"
    if not fits:
        raise FitError("every family failed to fit: " + "; ".join(failures.values()))
    fitted = [f for f in families if f in fits]
    comparisons = {}
    for i, a in enumerate(fitted):
        for b in fitted[i + 1:]:
            comparisons[(a, b)] = loglikelihood_ratio(tail, fits[a], fits[b])
    beaten = set()
    for (a, b), (r, p) in comparisons.items():
        if p < significance_threshold:
            if r < 0:
                beaten.add(a)
            elif r > 0:
                beaten.add(b)
    best = tuple(f for f in fitted if f not in beaten)
    return BestFitSet(best, significance_threshold, tail.xmin, tail.n, fits, comparisons, failures)
