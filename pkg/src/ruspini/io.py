"""CSV ingestion and CSV exports (grids, histograms, shift tables)."""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import RuspiniError
from .histogram import CrispHistogram, Dataset, FuzzyHistogram

_NUMBER = re.compile(r"^[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?$")


class DataError(RuspiniError, ValueError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


def fmt(v: float) -> str:
    return f"{float(v):.17g}"


def parse_dataset(text: str, skip_bad: bool = False) -> tuple[Dataset, int]:
    """Parse comma-separated numeric rows; returns the dataset and the skipped-row count.

    A first row with any non-numeric field is taken as the header.  Only
    plain decimal notation is accepted (no locale, no ``nan``/``inf``).
    """
    rows, columns, width, skipped = [], None, None, 0
    reader = csv.reader(io.StringIO(text))
    first = True
    for row in reader:
        line = reader.line_num
        fields = [f.strip() for f in row]
        if not fields or all(f == "" for f in fields):
            continue
        if first:
            first = False
            if not all(_NUMBER.match(f) for f in fields):
                columns = tuple(fields)
                width = len(fields)
                continue
        if width is None:
            width = len(fields)
        problem = None
        if len(fields) != width:
            problem = f"expected {width} fields, found {len(fields)}"
        else:
            bad = [f for f in fields if not _NUMBER.match(f)]
            if bad:
                problem = f"not a number: {bad[0]!r}"
        if problem:
            if skip_bad:
                skipped += 1
                continue
            raise DataError(line, problem)
        rows.append([float(f) for f in fields])
    pts = np.array(rows, dtype=float).reshape(len(rows), width or 0)
    return Dataset(pts, columns), skipped


def read_dataset(path, skip_bad: bool = False) -> tuple[Dataset, int]:
    return parse_dataset(Path(path).read_text(encoding="utf-8"), skip_bad)


def _meta_lines(meta: dict) -> list[str]:
    return [f"# {k}={v}" for k, v in meta.items()]


@dataclass
class GridExport:
    """Samples of a 2-D surface: ``values[i, j]`` at ``(ticks[0][i], ticks[1][j])``."""

    ticks: Sequence[np.ndarray]
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        shape = tuple(len(t) for t in self.ticks)
        if self.values.shape != shape:
            raise ValueError(f"value matrix {self.values.shape} does not match sample counts {shape}")

    def to_text(self) -> str:
        lines = _meta_lines(self.meta)
        if len(self.ticks) == 2:
            lines.append("x0\\x1," + ",".join(fmt(t) for t in self.ticks[1]))
            for t0, row in zip(self.ticks[0], self.values):
                lines.append(fmt(t0) + "," + ",".join(fmt(v) for v in row))
        else:
            lines.append("x0,value")
            for t0, v in zip(self.ticks[0], self.values):
                lines.append(f"{fmt(t0)},{fmt(v)}")
        return "\n".join(lines) + "\n"


def parse_grid_export(text: str) -> tuple[dict, list[np.ndarray], np.ndarray]:
    meta, body = {}, []
    for line in text.splitlines():
        if line.startswith("# "):
            k, _, v = line[2:].partition("=")
            meta[k] = v
        elif line:
            body.append(line.split(","))
    if body[0][0] == "x0\\x1":
        t1 = np.array([float(v) for v in body[0][1:]])
        t0 = np.array([float(r[0]) for r in body[1:]])
        vals = np.array([[float(v) for v in r[1:]] for r in body[1:]])
        return meta, [t0, t1], vals
    t0 = np.array([float(r[0]) for r in body[1:]])
    return meta, [t0], np.array([float(r[1]) for r in body[1:]])


def fuzzy_histogram_text(h: FuzzyHistogram, meta: dict | None = None) -> str:
    meta = dict(meta or {})
    meta.update(kind="fuzzy", n=h.n_points, dropped=h.dropped, total_mass=fmt(h.total_mass()))
    lines = _meta_lines(meta)
    lines.append(",".join(f"i{j + 1}" for j in range(h.partition.dim)) + ",mass")
    for set_id, mass in h.nonzero():
        lines.append(",".join(str(i) for i in set_id) + "," + fmt(mass))
    return "\n".join(lines) + "\n"


def crisp_histogram_text(h: CrispHistogram, meta: dict | None = None) -> str:
    meta = dict(meta or {})
    meta.update(kind="crisp", n=h.n_points, dropped=h.dropped)
    lines = _meta_lines(meta)
    lines.append(",".join(f"i{j + 1}" for j in range(len(h.axes))) + ",count")
    for idx in zip(*np.nonzero(h.counts)):
        lines.append(",".join(str(int(i) + 1) for i in idx) + f",{int(h.counts[idx])}")
    return "\n".join(lines) + "\n"


def shift_table_text(rows) -> str:
    lines = ["shift,crisp_l1,fuzzy_l1"]
    lines += [f"{fmt(s)},{fmt(c)},{fmt(f)}" for s, c, f in rows]
    return "\n".join(lines) + "\n"
