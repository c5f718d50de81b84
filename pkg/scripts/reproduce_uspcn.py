"""Full-dataset run against the published USPCN values.

Needs the NBER patent files (``cite75_99.txt`` and ``apat63_99.txt``) in
``--data``. Writes the tier-1, tier-2 and cross-tier run directories under
``--out`` and prints each computed value next to the published one.

    python3 scripts/reproduce_uspcn.py --data ~/nber --out runs/uspcn --workers 8
"""
import argparse
import json
import time
from pathlib import Path

from localpop import uspcn_reference as ref
from localpop.ingest import load_graph
from localpop.report import (AnalysisRun, FitOptions, file_digest, run_cross_tier, run_tier1,
                             run_tier2)

PCC_KEYS = ("global-internal", "global-external", "internal-external")


def fmt(v) -> str:
    return "-" if v is None else f"{v:.2f}" if isinstance(v, float) else str(v)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--data", type=Path, required=True)
    ap.add_argument("--out", type=Path, default=Path("runs/uspcn"))
    ap.add_argument("--workers", type=int, default=4)
    ap.add_argument("--xmin-policy", choices=("fixed", "ks"), default="fixed")
    args = ap.parse_args()
    cites, labs = args.data / "cite75_99.txt", args.data / "apat63_99.txt"
    inputs = {p.name: {"path": str(p), "sha256": file_digest(p)} for p in (cites, labs)}
    opts = FitOptions(xmin_policy=args.xmin_policy, workers=args.workers)

    t0 = time.perf_counter()
    graph, report = load_graph(cites, labs)
    print(f"loaded in {time.perf_counter() - t0:.0f}s")
    print(f"raw citations      {report.raw_edge_count:>12,}  published {ref.RAW_CITATIONS:,}")
    print(f"retained citations {report.retained_edge_count:>12,}  published {ref.LABELED_CITATIONS:,}")
    print(f"duplicates dropped {report.dropped_duplicate_count:>12,}")

    runs = {}
    for name, fn in (("tier1", run_tier1), ("tier2", run_tier2), ("cross_tier", run_cross_tier)):
        run = AnalysisRun(name, {"fit": opts.to_dict()}, inputs)
        run.tables = run.timed(name, fn, graph, opts)
        run.tables["ingest"] = [json.loads(report.to_json())]
        run.write(args.out / name)
        runs[name] = run.tables
        print(f"{name}: {run.timings[name]:.0f}s")

    t1 = runs["tier1"]
    for row in t1["global"]:
        print(f"global PL ({row['policy']}): alpha {fmt(row['alpha'])} at xmin {row['xmin']}, "
              f"published {ref.GLOBAL_PL_ALPHA}")
    print("\ncategory  ext.popular%(pub)  global  internal  external union  PCC g-i g-e i-e (pub)")
    corr = {r["category"]: r for r in t1["correlations"]}
    for r in t1["categories"]:
        c = r["category"]
        pcc = " ".join(fmt(corr[c][k]) for k in PCC_KEYS)
        pub = " ".join(fmt(v) for v in ref.CATEGORY_PCC.get(c, ()))
        print(f"{c:8d}  {r['externally_popular_pct']:6.1f} ({ref.EXTERNALLY_POPULAR_PCT.get(c)})"
              f"  {r['global']:>8}  {r['internal']:>8}  {r['external_union']:>12}  {pcc} ({pub})")

    print("\nchannel PCC (to, a, b): computed / published")
    for r in t1["channel_pcc"]:
        key = (r["to"], r["from_a"], r["from_b"])
        print(f"  {key}: {fmt(r['pcc'])} / {fmt(ref.CATEGORY_CHANNEL_PCC.get(key))}")

    print("\nsubcategory  global  internal  external  ext.popular%  (published)")
    for r in runs["tier2"]["subcategories"]:
        pub = ref.SUBCATEGORY_RESULTS.get(r["subcategory"])
        print(f"{r['subcategory']:11d}  {r['global']:>6}  {r['internal']:>8}  {r['external']:>8}"
              f"  {r['externally_popular_pct']:6.1f}  {pub}")

    print("\ncross-tier fits (to, from): computed / published")
    for r in runs["cross_tier"]["channel_fits"]:
        print(f"  ({r['to']}, {r['from']}): {r['best']} / {ref.CROSS_TIER_FITS.get((r['to'], r['from']))}")
    for r in runs["cross_tier"]["channel_pcc"]:
        key = (r["to"], r["from_a"], r["from_b"])
        print(f"  PCC {key}: {fmt(r['pcc'])} / {fmt(ref.CROSS_TIER_PCC.get(key))}")


if __name__ == "__main__":
    main()
