"""Streaming readers for the NBER citation and patent-attribute files.

Defaults follow the public file layout (``cite75_99.txt`` with columns
CITING,CITED and ``apat63_99.txt`` with PATENT,...,CAT,SUBCAT,...). Column
names or zero-based positions can be overridden.
"""
from __future__ import annotations

import json
import logging
import re
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from .graph_core import LabeledDigraph
from .hierarchy import GroupLabel, SUBCATEGORY_NAMES

log = logging.getLogger(__name__)

CHUNK_ROWS = 1_000_000


class MalformedRowError(ValueError):
    def __init__(self, path, line: int, reason: str):
        super().__init__(f"{path}:{line}: {reason}")
        self.path = str(path)
        self.line = line


@dataclass(frozen=True)
class TableFormat:
    """Delimited-text layout. Columns are header names or 0-based indices."""

    delimiter: str = ","
    header: bool = True
    chunk_rows: int = CHUNK_ROWS


@dataclass(frozen=True)
class LabelColumns:
    patent: str | int = "PATENT"
    category: str | int | None = "CAT"
    subcategory: str | int = "SUBCAT"


@dataclass(frozen=True)
class CitationColumns:
    citing: str | int = "CITING"
    cited: str | int = "CITED"


@dataclass(frozen=True, eq=False)
class LabelTable:
    """Patent id -> GroupLabel map backed by sorted arrays."""

    ids: np.ndarray
    tier1: np.ndarray
    tier2: np.ndarray
    rows_read: int = 0
    skipped_unknown_subcategory: int = 0
    skipped_category_mismatch: int = 0

    @property
    def skipped(self) -> int:
        return self.skipped_unknown_subcategory + self.skipped_category_mismatch

    def __len__(self):
        return len(self.ids)

    def __contains__(self, pid) -> bool:
        i = np.searchsorted(self.ids, pid)
        return bool(i < len(self.ids) and self.ids[i] == pid)

    def __getitem__(self, pid) -> GroupLabel:
        i = int(np.searchsorted(self.ids, pid))
        if i == len(self.ids) or self.ids[i] != pid:
            raise KeyError(pid)
        return GroupLabel(int(self.tier1[i]), int(self.tier2[i]))

    def __iter__(self):
        return iter(self.ids.tolist())

    def as_dict(self) -> dict[int, GroupLabel]:
        return {int(p): GroupLabel(int(a), int(b))
                for p, a, b in zip(self.ids, self.tier1, self.tier2)}

    @classmethod
    def from_mapping(cls, labels) -> "LabelTable":
        ids = np.array(sorted(labels), dtype=np.int64)
        return cls(ids,
                   np.array([labels[i].tier1 for i in ids.tolist()], dtype=np.int16),
                   np.array([labels[i].tier2 for i in ids.tolist()], dtype=np.int16),
                   rows_read=len(ids))


@dataclass(frozen=True)
class IngestReport:
    raw_edge_count: int
    retained_edge_count: int
    dropped_unlabeled_endpoint_count: int
    dropped_duplicate_count: int
    dropped_self_loop_count: int
    labeled_vertex_count: int

    def __post_init__(self):
        dropped = (self.dropped_unlabeled_endpoint_count + self.dropped_duplicate_count
                   + self.dropped_self_loop_count)
        if self.raw_edge_count != self.retained_edge_count + dropped:
            raise AssertionError("ingest counts do not add up")

    def to_text(self) -> str:
        return "".join(f"{k}={v}\n" for k, v in sorted(asdict(self).items()))

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2) + "\n"


@dataclass(frozen=True, eq=False)
class EdgeStream:
    """Retained citations as dense indices into ``labels.ids``."""

    labels: LabelTable
    sources: np.ndarray
    targets: np.ndarray

    def original_pairs(self) -> np.ndarray:
        return np.column_stack([self.labels.ids[self.sources], self.labels.ids[self.targets]])

    def to_graph(self) -> LabeledDigraph:
        # the stream is already validated: labeled, loop-free, deduplicated
        return LabeledDigraph.from_arrays(self.sources, self.targets, self.labels.ids,
                                          self.labels.tier1, self.labels.tier2,
                                          validate=False)


def _reader(path, columns: list, fmt: TableFormat, dtype=None):
    kinds = {isinstance(c, int) for c in columns}
    if len(kinds) > 1:
        raise ValueError("give all columns by name or all by position")
    if not fmt.header and kinds != {True}:
        raise ValueError("headerless files need integer column positions")
    reader = pd.read_csv(
        path, sep=fmt.delimiter, header=0 if fmt.header else None,
        usecols=columns, dtype=dtype, chunksize=fmt.chunk_rows,
        skipinitialspace=True, keep_default_na=False, na_values=[""],
        engine="c")
    # Rows with surplus trailing fields are read up to the selected columns;
    # short rows surface as blanks and are rejected by the column checks.
    with reader:
        while True:
            try:
                chunk = next(reader)
            except StopIteration:
                return
            except pd.errors.ParserError as exc:
                line = re.search(r"line (\d+)", str(exc))
                row = re.search(r"row (\d+)", str(exc))  # 0-based, header included
                at = int(line.group(1)) if line else int(row.group(1)) + 1 if row else -1
                raise MalformedRowError(path, at, str(exc)) from exc
            yield chunk


def _column(chunk: pd.DataFrame, col, cols: list):
    if isinstance(col, int) and col not in chunk.columns:
        # header present: usecols keeps file order, so locate by rank
        return chunk.iloc[:, sorted(cols).index(col)]
    return chunk[col]


def _integers(series: pd.Series, path, first_line: int, what: str) -> np.ndarray:
    """Convert a column to int64, raising with the file line of the first bad cell."""
    if pd.api.types.is_integer_dtype(series.dtype):
        return series.to_numpy(dtype=np.int64)
    num = pd.to_numeric(series, errors="coerce")
    bad = num.isna().to_numpy() | (num.to_numpy(dtype=float) % 1 != 0)
    if bad.any():
        i = int(np.argmax(bad))
        val = series.iloc[i]
        reason = f"{what} is missing" if pd.isna(val) else f"{what} {val!r} is not an integer"
        raise MalformedRowError(path, first_line + i, reason)
    return num.to_numpy(dtype=np.int64)


def _integer_columns(chunk, specs, cols, path, first_line) -> list[np.ndarray]:
    """Convert several columns, reporting the earliest bad line across all of them."""
    out, errors = [], []
    for col, what in specs:
        try:
            out.append(_integers(_column(chunk, col, cols), path, first_line, what))
        except MalformedRowError as exc:
            errors.append(exc)
    if errors:
        raise min(errors, key=lambda e: e.line)
    return out


def load_labels(path, columns: LabelColumns = LabelColumns(),
                fmt: TableFormat = TableFormat()) -> LabelTable:
    """Read patent labels, keeping rows whose subcategory is a known code.

    Blank or unknown subcategories are skipped and counted; so are rows
    whose category disagrees with the subcategory's leading digit. A
    non-integer patent id or duplicate patent id is an error.
    """
    cols = [columns.patent, columns.subcategory]
    if columns.category is not None:
        cols.append(columns.category)
    known = np.array(sorted(SUBCATEGORY_NAMES))
    ids, subs, lines = [], [], []
    rows = unknown = mismatch = 0
    line = 2 if fmt.header else 1
    for chunk in _reader(path, cols, fmt, dtype=str):
        n = len(chunk)
        pid = _integers(_column(chunk, columns.patent, cols), path, line, "patent id")
        sub = pd.to_numeric(_column(chunk, columns.subcategory, cols), errors="coerce").to_numpy()
        blank = _column(chunk, columns.subcategory, cols).isna().to_numpy()
        unparsable = np.isnan(sub) & ~blank
        if unparsable.any():
            i = int(np.argmax(unparsable))
            raise MalformedRowError(path, line + i, "subcategory "
                                    f"{_column(chunk, columns.subcategory, cols).iloc[i]!r} is not numeric")
        sub_i = np.where(np.isnan(sub), -1, sub).astype(np.int64)
        ok = np.isin(sub_i, known) & (sub == sub_i)
        unknown += int((~ok).sum())
        if columns.category is not None:
            cat = pd.to_numeric(_column(chunk, columns.category, cols), errors="coerce").to_numpy()
            bad_cat = ok & ~(cat == sub_i // 10)
            mismatch += int(bad_cat.sum())
            ok &= ~bad_cat
        ids.append(pid[ok])
        subs.append(sub_i[ok])
        lines.append(line + np.flatnonzero(ok))
        rows += n
        line += n
    ids = np.concatenate(ids) if ids else np.empty(0, np.int64)
    subs = np.concatenate(subs) if subs else np.empty(0, np.int64)
    lines = np.concatenate(lines) if lines else np.empty(0, np.int64)
    order = np.argsort(ids, kind="stable")
    ids, subs, lines = ids[order], subs[order], lines[order]
    dup = np.flatnonzero(np.diff(ids) == 0)
    if len(dup):
        i = dup[np.argmin(lines[dup + 1])]
        raise MalformedRowError(path, int(lines[i + 1]), f"patent id {ids[i]} already "
                                f"appeared on line {lines[i]}")
    table = LabelTable(ids, (subs // 10).astype(np.int16), subs.astype(np.int16),
                       rows_read=rows, skipped_unknown_subcategory=unknown,
                       skipped_category_mismatch=mismatch)
    log.info("labels: %d rows, %d kept, %d skipped", rows, len(table), table.skipped)
    return table


def load_citations(path, labels: LabelTable, columns: CitationColumns = CitationColumns(),
                   fmt: TableFormat = TableFormat()) -> tuple[EdgeStream, IngestReport]:
    """Read citing->cited pairs, dropping edges with an unlabeled endpoint,
    self-loops and repeated pairs (first occurrence kept)."""
    ids = labels.ids
    n = len(ids)
    keys = []
    raw = unlabeled = loops = 0
    line = 2 if fmt.header else 1
    cols = [columns.citing, columns.cited]
    for chunk in _reader(path, cols, fmt):
        m = len(chunk)
        src, dst = _integer_columns(chunk, [(columns.citing, "citing id"),
                                            (columns.cited, "cited id")], cols, path, line)
        si = np.searchsorted(ids, src)
        di = np.searchsorted(ids, dst)
        ok = (si < n) & (di < n)
        ok[ok] &= (ids[si[ok]] == src[ok]) & (ids[di[ok]] == dst[ok])
        unlabeled += int(m - ok.sum())
        si, di = si[ok], di[ok]
        loop = si == di
        loops += int(loop.sum())
        keys.append(si[~loop] * n + di[~loop])
        raw += m
        line += m
    keys = np.concatenate(keys) if keys else np.empty(0, np.int64)
    _, first = np.unique(keys, return_index=True)
    first.sort()
    keys = keys[first]
    report = IngestReport(
        raw_edge_count=raw,
        retained_edge_count=len(keys),
        dropped_unlabeled_endpoint_count=unlabeled,
        dropped_duplicate_count=raw - unlabeled - loops - len(keys),
        dropped_self_loop_count=loops,
        labeled_vertex_count=n,
    )
    log.info("citations: %s", report.to_text().replace("\n", " "))
    return EdgeStream(labels, keys // n if n else keys, keys % n if n else keys), report


def load_graph(citations_path, labels_path,
               citation_columns: CitationColumns = CitationColumns(),
               label_columns: LabelColumns = LabelColumns(),
               fmt: TableFormat = TableFormat()) -> tuple[LabeledDigraph, IngestReport]:
    labels = load_labels(labels_path, label_columns, fmt)
    stream, report = load_citations(citations_path, labels, citation_columns, fmt)
    return stream.to_graph(), report


def write_graph(graph: LabeledDigraph, directory) -> tuple[Path, Path]:
    """Write ``citations.csv`` and ``labels.csv`` in the layout the loaders read."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    cites, labs = directory / "citations.csv", directory / "labels.csv"
    pd.DataFrame(graph.edges(), columns=["CITING", "CITED"]).to_csv(cites, index=False)
    pd.DataFrame({"PATENT": graph.original_ids, "CAT": graph.tier1,
                  "SUBCAT": graph.tier2}).to_csv(labs, index=False)
    return cites, labs
