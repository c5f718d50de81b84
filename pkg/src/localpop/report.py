"""Whole-graph analyses that produce table-shaped records, plus the run
directory format they are written in.

Every record is built from the public module operations (decompose,
correlate, distfit) so each cell can be recomputed from the recorded
configuration. Fit failures in individual cells are stored inline as
``"ErrorType: message"`` strings instead of aborting the run.
"""
from __future__ import annotations

import csv
import hashlib
import itertools
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .correlate import correlation_suite, pairwise_channel_correlation, pearson
from .decompose import channel_indegree, decompose_indegree, externally_popular_fraction
from .distfit import ALL_FAMILIES, MIN_TAIL, Family, FitError, FitResult, XminPolicy, fit, select_best
from .graph_core import LabeledDigraph, edge_matrix

# Across-tier sample studies analyzed by default: (to category, from subcategory)
# fits and (to category, from subcategory a, from subcategory b) correlations.
CROSS_TIER_FIT_PAIRS = ((4, 21), (4, 22), (6, 51), (6, 52), (6, 53),
                        (5, 61), (5, 62), (5, 69), (4, 69))
CROSS_TIER_PCC_TRIPLES = ((4, 21, 22), (4, 21, 69), (4, 22, 69),
                          (5, 61, 62), (5, 62, 69), (5, 61, 69),
                          (6, 51, 52), (6, 52, 53), (6, 51, 53))


@dataclass(frozen=True)
class FitOptions:
    """How every best-fit cell of an analysis is computed."""

    xmin: int = 1
    xmin_policy: str = "fixed"
    min_tail: int = MIN_TAIL
    threshold: float = 0.1
    seed: int = 0
    families: tuple[str, ...] = tuple(f.value for f in ALL_FAMILIES)
    workers: int = 1

    def __post_init__(self):
        XminPolicy(self.xmin_policy, self.xmin, self.min_tail)
        for f in self.families:
            Family(f)
        if not 0 < self.threshold < 1:
            raise ValueError("significance threshold must lie in (0, 1)")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    @property
    def policy(self) -> XminPolicy:
        return XminPolicy(self.xmin_policy, self.xmin, self.min_tail)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["families"] = list(self.families)
        del d["workers"]  # does not influence any output
        return d


def _error(exc: Exception) -> str:
    return f"{type(exc).__name__}: {exc}"


def best_fit_cell(samples, options: FitOptions) -> dict:
    """Best-fit set of one degree vector, or an inline error."""
    try:
        best = select_best(samples, options.threshold, options.policy, options.families,
                           options.seed)
    except (FitError, ValueError) as exc:
        return {"best": None, "label": None, "error": _error(exc)}
    d = best.to_dict()
    del d["threshold"]
    d["label"] = best.label
    d["error"] = None
    return d


def _label(cell: dict) -> str:
    return cell["label"] if cell["error"] is None else "error"


def _union(cells) -> list[str]:
    got = {f for c in cells if c["best"] for f in c["best"]}
    return [f.value for f in ALL_FAMILIES if f.value in got]



def _map(options: FitOptions, fn, items):
    items = list(items)
    if options.workers == 1 or len(items) < 2:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(options.workers) as pool:
        return list(pool.map(fn, items))


def _group_channels(graph, dest, sources, scope=None) -> dict:
    return {s: channel_indegree(graph, dest, s, scope).counts for s in sources}


def _pairwise(dest, channels: dict) -> list[dict]:
    rows = []
    for a, b in itertools.combinations(sorted(channels), 2):
        x, y = channels[a], channels[b]
        pcc = pearson(x, y) if len(x) >= 2 else None
        rows.append({"to": dest, "from_a": a, "from_b": b, "pcc": pcc, "n": int(len(x))})
    return rows


def global_fit(graph: LabeledDigraph, options: FitOptions) -> list[dict]:
    """Power-law exponent and best-fit set of the whole-graph indegree,
    side by side for xmin = ``options.xmin`` and the KS-optimal xmin."""
    indeg = graph.indegree()
    rows = []
    for kind in ("fixed", "ks"):
        opts = FitOptions(options.xmin, kind, options.min_tail, options.threshold,
                          options.seed, options.families)
        row = {"policy": kind}
        try:
            pl: FitResult = fit(indeg, Family.PL, opts.policy, opts.seed)
            row.update(xmin=pl.xmin, alpha=pl.params[0], n=pl.tail_sample_size,
                       ks_distance=pl.ks_distance)
        except (FitError, ValueError) as exc:
            row.update(xmin=None, alpha=None, n=None, ks_distance=None, error=_error(exc))
            rows.append(row)
            continue
        cell = best_fit_cell(indeg, opts)
        row.update(best=_label(cell), error=cell["error"])
        rows.append(row)
    return rows


def run_tier1(graph: LabeledDigraph, options: FitOptions = FitOptions(),
              with_global: bool = True) -> dict[str, list[dict]]:
    """Category-level fits, correlations and channel correlations.

    Tables: ``categories`` (best-fit sets and externally-popular share),
    ``correlations`` (the three PCCs per category), ``channel_pcc`` (every
    pair of external sources into every category), ``fits`` (the full fit
    detail behind every best-fit label), ``edge_matrix`` and, optionally,
    ``global``.
    """
    decomp = decompose_indegree(graph, 1)
    cats = graph.groups(1)

    def one(cat):
        sub = decomp.restrict(cat)
        sources = [c for c in cats if c != cat]
        channels = _group_channels(graph, cat, sources)
        cells = {"global": best_fit_cell(sub.global_in, options),
                 "internal": best_fit_cell(sub.internal_in, options)}
        channel_cells = {s: best_fit_cell(v, options) for s, v in channels.items()}
        frac = externally_popular_fraction(sub)
        row = {"category": cat, "n": len(sub),
               "global": _label(cells["global"]), "internal": _label(cells["internal"]),
               "externally_popular": frac, "externally_popular_pct": 100.0 * frac,
               "external_union": ", ".join(_union(channel_cells.values())),
               "external_by_source": {str(s): _label(c) for s, c in channel_cells.items()}}
        corr = {"category": cat, "n": len(sub)}
        for r in correlation_suite(sub):
            corr["-".join(r.label)] = r.pcc
        fits = [dict(group=cat, component=k, source=None, **c) for k, c in cells.items()]
        fits += [dict(group=cat, component="channel", source=s, **c) for s, c in channel_cells.items()]
        return row, corr, _pairwise(cat, channels), fits

    results = _map(options, one, cats)
    tables = {
        "categories": [r[0] for r in results],
        "correlations": [r[1] for r in results],
        "channel_pcc": [row for r in results for row in r[2]],
        "fits": [row for r in results for row in r[3]],
        "edge_matrix": edge_matrix(graph, 1).to_records(),
    }
    if with_global:
        tables["global"] = global_fit(graph, options)
    return tables


def run_tier2(graph: LabeledDigraph, options: FitOptions = FitOptions(),
              categories=None) -> dict[str, list[dict]]:
    """Subcategory-level analysis, each category analyzed on its own with
    only the links that stay inside it.

    ``external`` fits the combined in-links from the category's other
    subcategories; ``external_union`` merges the per-source channel sets.
    """
    cats = graph.groups(1) if categories is None else tuple(categories)
    subs_present = set(graph.groups(2))

    def one(cat):
        decomp = decompose_indegree(graph, 2, scope=cat)
        subs = [s for s in sorted(set(decomp.groups.tolist())) if s in subs_present]
        rows, corrs, pairs, fits = [], [], [], []
        for s in subs:
            part = decomp.restrict(s)
            sources = [t for t in subs if t != s]
            channels = _group_channels(graph, s, sources, scope=cat)
            cells = {"global": best_fit_cell(part.global_in, options),
                     "internal": best_fit_cell(part.internal_in, options),
                     "external": best_fit_cell(part.external_in, options)}
            channel_cells = {t: best_fit_cell(v, options) for t, v in channels.items()}
            frac = externally_popular_fraction(part)
            row = {"category": cat, "subcategory": s, "n": len(part),
                   "global": _label(cells["global"]), "internal": _label(cells["internal"]),
                   "external": _label(cells["external"]),
                   "external_union": ", ".join(_union(channel_cells.values())),
                   "externally_popular": frac, "externally_popular_pct": 100.0 * frac}
            for r in correlation_suite(part):
                row["-".join(r.label)] = r.pcc
            rows.append(row)
            pairs += _pairwise(s, channels)
            fits += [dict(group=s, component=k, source=None, **c) for k, c in cells.items()]
            fits += [dict(group=s, component="channel", source=t, **c)
                     for t, c in channel_cells.items()]
        return rows, pairs, fits

    results = _map(options, one, cats)
    return {
        "subcategories": [row for r in results for row in r[0]],
        "channel_pcc": [row for r in results for row in r[1]],
        "fits": [row for r in results for row in r[2]],
    }


def run_cross_tier(graph: LabeledDigraph, options: FitOptions = FitOptions(),
                   fit_pairs=CROSS_TIER_FIT_PAIRS,
                   pcc_triples=CROSS_TIER_PCC_TRIPLES) -> dict[str, list[dict]]:
    """Channel fits for (destination, source) pairs and channel correlations
    for (destination, source a, source b) triples; groups may sit at
    different tiers."""

    def one_fit(pair):
        dest, src = pair
        try:
            counts = channel_indegree(graph, dest, src).counts
        except (KeyError, ValueError) as exc:
            cell = {"best": None, "label": None, "error": _error(exc)}
        else:
            cell = best_fit_cell(counts, options)
        return {"to": dest, "from": src, "best": _label(cell), "error": cell["error"]}, \
            dict(group=dest, component="channel", source=src, **cell)

    fitted = _map(options, one_fit, [tuple(p) for p in fit_pairs])
    pccs = []
    for dest, a, b in pcc_triples:
        row = {"to": dest, "from_a": a, "from_b": b}
        try:
            r = pairwise_channel_correlation(graph, dest, a, b)
            row.update(pcc=r.pcc, n=r.n, error=None)
        except (KeyError, ValueError) as exc:
            row.update(pcc=None, n=None, error=_error(exc))
        pccs.append(row)
    return {"channel_fits": [f[0] for f in fitted], "channel_pcc": pccs,
            "fits": [f[1] for f in fitted]}


def emit_ccdf(samples, fits=(), path=None) -> np.ndarray:
    """Empirical CCDF ``P(X >= x)`` at each distinct sample value, with one
    extra column per fit.

    A fit with ``xmin`` above the smallest sample describes only the tail,
    so its curve is scaled by the empirical ``P(X >= xmin)`` and left NaN
    below ``xmin``. With ``path`` the table is also written as
    whitespace-separated text with a ``#`` header line.
    """
    x = np.asarray(samples)
    if x.size == 0:
        raise ValueError("no samples")
    values, counts = np.unique(x, return_counts=True)
    ccdf = np.cumsum(counts[::-1])[::-1] / x.size
    cols = [values.astype(float), ccdf]
    for f in fits:
        col = np.full(len(values), np.nan)
        tail = values >= f.xmin
        if tail.any():
            mass = ccdf[np.argmax(tail)]
            col[tail] = mass * f.ccdf(values[tail])
        cols.append(col)
    table = np.column_stack(cols)
    if path is not None:
        header = " ".join(["x", "ccdf"] + [f.family.value for f in fits])
        np.savetxt(path, table, fmt="%.10g", header=header)
    return table


def canonical(obj):
    """Plain JSON-able copy: numpy scalars unwrapped, NaN/inf become None,
    dict keys stringified."""
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [canonical(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, Family):
        return obj.value
    return obj


def dumps(obj) -> str:
    return json.dumps(canonical(obj), sort_keys=True, indent=2) + "\n"


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def graph_digest(graph: LabeledDigraph) -> str:
    h = hashlib.sha256()
    for arr in (graph.original_ids, graph.tier1, graph.tier2, graph.sources, graph.targets):
        h.update(np.ascontiguousarray(arr, dtype=np.int64).tobytes())
    return h.hexdigest()


def _csv_value(v):
    if v is None:
        return ""
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return v


def write_csv(rows: list[dict], path) -> None:
    rows = canonical(rows)
    cols = []
    for r in rows:
        cols += [k for k in r if k not in cols]
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _csv_value(r.get(k)) for k in cols})


@dataclass
class AnalysisRun:
    """One analysis invocation: what went in, how it was configured, what
    came out. Timings are kept apart so the outputs stay byte-stable."""

    command: str
    config: dict
    inputs: dict
    tables: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    version: str = __version__

    def manifest(self) -> dict:
        return {"command": self.command, "config": self.config, "inputs": self.inputs,
                "version": self.version, "tables": sorted(self.tables)}

    def timed(self, name: str, fn, *args, **kwargs):
        t0 = time.perf_counter()
        out = fn(*args, **kwargs)
        self.timings[name] = time.perf_counter() - t0
        return out

    def write(self, directory) -> Path:
        """``run.json`` holds the manifest; each table gets ``<name>.json``
        and ``<name>.csv``; wall-clock times go to ``timings.json``."""
        out = Path(directory)
        out.mkdir(parents=True, exist_ok=True)
        (out / "run.json").write_text(dumps(self.manifest()))
        for name, rows in self.tables.items():
            payload = {"config": self.config, "version": self.version, "rows": rows}
            (out / f"{name}.json").write_text(dumps(payload))
            write_csv(rows, out / f"{name}.csv")
        (out / "timings.json").write_text(json.dumps(
            {k: round(v, 6) for k, v in self.timings.items()}, sort_keys=True, indent=2) + "\n")
        return out
