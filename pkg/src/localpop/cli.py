"""Command-line entry point: ``localpop <subcommand> ...``.

Exit status is 0 on success, 1 on a fatal error (unreadable input, bad
configuration, infeasible generator matrix) and 2 on bad usage. Failures
confined to single table cells are recorded in the outputs and do not
change the exit status.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np
import pandas as pd

from . import __version__
from .decompose import channel_indegree, decompose_indegree
from .distfit import Family, FitError, fit, select_best
from .generate import GeneratorConfig, InfeasibleMatrixError, LocalAttachmentGenerator
from .graph_core import GraphBuildError
from .ingest import (CitationColumns, LabelColumns, MalformedRowError, TableFormat,
                     load_citations, load_labels, write_graph)
from .report import (CROSS_TIER_FIT_PAIRS, CROSS_TIER_PCC_TRIPLES, AnalysisRun, FitOptions,
                     dumps, emit_ccdf, file_digest, run_cross_tier, run_tier1, run_tier2)

log = logging.getLogger("localpop")

FATAL = (GraphBuildError, MalformedRowError, InfeasibleMatrixError, FitError, OSError,
         ValueError, KeyError)


def _column(text: str):
    return int(text) if text.isdigit() else text


def _add_graph_args(p):
    g = p.add_argument_group("graph input")
    g.add_argument("--graph-dir", type=Path,
                   help="directory holding citations.csv and labels.csv")
    g.add_argument("--citations", type=Path, help="citing,cited pairs file")
    g.add_argument("--labels", type=Path, help="patent label file")
    g.add_argument("--citing-col", type=_column, default="CITING")
    g.add_argument("--cited-col", type=_column, default="CITED")
    g.add_argument("--patent-col", type=_column, default="PATENT")
    g.add_argument("--cat-col", type=_column, default="CAT")
    g.add_argument("--subcat-col", type=_column, default="SUBCAT")
    g.add_argument("--delimiter", default=",")
    g.add_argument("--no-header", action="store_true",
                   help="files have no header row; columns must be 0-based indices")


def _add_fit_args(p):
    g = p.add_argument_group("fitting")
    g.add_argument("--xmin", type=int, default=1, help="fixed xmin, or the scan floor with --xmin-policy ks")
    g.add_argument("--xmin-policy", choices=("fixed", "ks"), default="fixed")
    g.add_argument("--min-tail", type=int, default=50, help="smallest tail sample to fit")
    g.add_argument("--threshold", type=float, default=0.1, help="LRT significance threshold")
    g.add_argument("--families", default=",".join(f.value for f in Family),
                   help="comma-separated families to compare")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--workers", type=int, default=1, help="threads for per-group analyses")


def _fit_options(args) -> FitOptions:
    return FitOptions(args.xmin, args.xmin_policy, args.min_tail, args.threshold, args.seed,
                      tuple(_families(args.families)), args.workers)


def _families(text: str) -> list[str]:
    return [Family(f.strip().upper()).value for f in text.split(",") if f.strip()]


def _paths(args) -> tuple[Path, Path]:
    if args.graph_dir is not None:
        return args.graph_dir / "citations.csv", args.graph_dir / "labels.csv"
    if args.citations is None or args.labels is None:
        raise ValueError("give --graph-dir or both --citations and --labels")
    return args.citations, args.labels


def _load(args):
    cites, labs = _paths(args)
    fmt = TableFormat(args.delimiter, not args.no_header)
    labels = load_labels(labs, LabelColumns(args.patent_col, args.cat_col, args.subcat_col), fmt)
    stream, report = load_citations(cites, labels, CitationColumns(args.citing_col, args.cited_col), fmt)
    inputs = {"citations": {"path": str(cites), "sha256": file_digest(cites)},
              "labels": {"path": str(labs), "sha256": file_digest(labs)}}
    return labels, stream.to_graph(), report, inputs


def _analysis(args, command: str, config: dict, body) -> int:
    run = AnalysisRun(command, config, {})
    labels, graph, report, inputs = run.timed("ingest", _load, args)
    run.inputs = inputs
    run.tables["ingest"] = [json.loads(report.to_json())]
    body(run, graph)
    out = run.write(args.out)
    print(f"wrote {len(run.tables)} tables to {out}")
    return 0


def cmd_ingest_check(args) -> int:
    labels, graph, report, _ = _load(args)
    print(f"label_rows_read={labels.rows_read}")
    print(f"label_rows_skipped={labels.skipped}")
    sys.stdout.write(report.to_text())
    if args.json is not None:
        Path(args.json).write_text(report.to_json())
    return 0


def cmd_tier1(args) -> int:
    opts = _fit_options(args)
    config = {"tier": 1, "scope": None, "fit": opts.to_dict()}
    return _analysis(args, "analyze-tier1", config,
                     lambda run, g: run.tables.update(run.timed("tier1", run_tier1, g, opts)))


def cmd_tier2(args) -> int:
    opts = _fit_options(args)
    scope = args.scope
    config = {"tier": 2, "scope": scope, "fit": opts.to_dict()}
    cats = None if scope is None else [scope]
    return _analysis(args, "analyze-tier2", config,
                     lambda run, g: run.tables.update(run.timed("tier2", run_tier2, g, opts, cats)))


def _tuples(text: str | None, width: int, default):
    if text is None:
        return default
    out = []
    for item in text.split(","):
        parts = tuple(int(v) for v in item.split(":"))
        if len(parts) != width:
            raise ValueError(f"expected {width} ':'-separated group codes, got {item!r}")
        out.append(parts)
    return tuple(out)


def cmd_cross_tier(args) -> int:
    opts = _fit_options(args)
    pairs = _tuples(args.pairs, 2, CROSS_TIER_FIT_PAIRS)
    triples = _tuples(args.triples, 3, CROSS_TIER_PCC_TRIPLES)
    config = {"tier": "cross", "scope": None, "fit": opts.to_dict(),
              "pairs": [list(p) for p in pairs], "triples": [list(t) for t in triples]}
    return _analysis(args, "cross-tier", config, lambda run, g: run.tables.update(
        run.timed("cross_tier", run_cross_tier, g, opts, pairs, triples)))


def _read_samples(path: Path, column: str | None) -> np.ndarray:
    if column is not None:
        values = pd.read_csv(path, usecols=[column])[column]
    else:
        values = pd.read_csv(path, header=None, sep=r"\s+").iloc[:, 0]
    x = pd.to_numeric(values, errors="raise").to_numpy()
    if np.any(x != np.round(x)):
        raise ValueError(f"{path}: samples must be integers")
    return x.astype(np.int64)


def _graph_samples(args) -> np.ndarray:
    _, graph, _, _ = _load(args)
    if args.component == "channel":
        if args.group is None or args.source is None:
            raise ValueError("--component channel needs --group and --source")
        return channel_indegree(graph, args.group, args.source, args.scope).counts
    if args.group is None and args.component == "global" and args.scope is None:
        return graph.indegree()
    tier = args.tier
    decomp = decompose_indegree(graph, tier, args.scope)
    if args.group is not None:
        decomp = decomp.restrict(args.group)
    return {"global": decomp.global_in, "internal": decomp.internal_in,
            "external": decomp.external_in}[args.component]


def _samples(args) -> np.ndarray:
    if args.samples is not None:
        return _read_samples(args.samples, args.column)
    return _graph_samples(args)


def cmd_fit(args) -> int:
    x = _samples(args)
    opts = _fit_options(args)
    families = list(opts.families)
    if len(families) == 1:
        result = fit(x, families[0], opts.policy, opts.seed).to_dict()
    else:
        result = select_best(x, opts.threshold, opts.policy, families, opts.seed).to_dict()
    result["config"] = opts.to_dict()
    text = dumps(result)
    if args.out is not None:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_ccdf(args) -> int:
    x = _samples(args)
    opts = _fit_options(args)
    fits = [fit(x, f, opts.policy, opts.seed) for f in _families(args.fit)] if args.fit else []
    table = emit_ccdf(x, fits, args.out)
    print(f"wrote {len(table)} points to {args.out}")
    return 0


def cmd_generate(args) -> int:
    cfg = GeneratorConfig.load(args.config)
    if args.seed is not None:
        cfg = GeneratorConfig.from_dict({**cfg.to_dict(), "seed": args.seed})
    gen = LocalAttachmentGenerator(cfg)
    graph = gen.run()
    out = Path(args.out)
    write_graph(graph, out)
    (out / "config.json").write_text(dumps(cfg.to_dict()))
    print(f"wrote {graph.vertex_count} vertices and {graph.edge_count} edges to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="localpop", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest-check", help="load citations and labels, print drop counts")
    _add_graph_args(p)
    p.add_argument("--json", type=Path, help="also write the report as JSON")
    p.set_defaults(func=cmd_ingest_check)

    for name, func, helptext in (("analyze-tier1", cmd_tier1, "category-level analysis"),
                                 ("analyze-tier2", cmd_tier2, "subcategory-level analysis"),
                                 ("cross-tier", cmd_cross_tier, "across-tier channel studies")):
        p = sub.add_parser(name, help=helptext)
        _add_graph_args(p)
        _add_fit_args(p)
        p.add_argument("--out", type=Path, required=True, help="run output directory")
        if name == "analyze-tier2":
            p.add_argument("--scope", type=int, help="analyze a single category")
        if name == "cross-tier":
            p.add_argument("--pairs", help="DEST:SRC,... channel fits (default: built-in sample)")
            p.add_argument("--triples", help="DEST:A:B,... channel PCCs (default: built-in sample)")
        p.set_defaults(func=func)

    for name, func, helptext in (("fit", cmd_fit, "fit or compare families on a degree sample"),
                                 ("ccdf", cmd_ccdf, "write CCDF plot data")):
        p = sub.add_parser(name, help=helptext)
        src = p.add_argument_group("sample source")
        src.add_argument("--samples", type=Path,
                         help="file of integer samples (one per line, or a CSV with --column)")
        src.add_argument("--column", help="CSV column holding the samples")
        _add_graph_args(p)
        src.add_argument("--tier", type=int, choices=(1, 2), default=1)
        src.add_argument("--scope", type=int, help="category scope for tier-2 samples")
        src.add_argument("--group", type=int, help="restrict to one destination group")
        src.add_argument("--source", type=int, help="source group of a channel")
        src.add_argument("--component", choices=("global", "internal", "external", "channel"),
                         default="global")
        _add_fit_args(p)
        if name == "fit":
            p.add_argument("--out", type=Path, help="write JSON here instead of stdout")
        else:
            p.add_argument("--out", type=Path, required=True, help="output text file")
            p.add_argument("--fit", help="comma-separated families to add as fitted columns")
        p.set_defaults(func=func)

    p = sub.add_parser("generate", help="synthesize a labeled graph from an edge matrix")
    p.add_argument("--config", type=Path, required=True, help="generator config JSON")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--out", type=Path, required=True, help="output graph directory")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except FATAL as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
