"""Fuzzy and crisp histograms over grid partitions, and density estimates.

A fuzzy histogram credits every in-universe point to the ``2**d`` sets
cornering its bin, each in proportion to its membership.  Because those
memberships sum to one, total mass equals the number of retained points.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, EmptyHistogram, OutOfUniverse
from .partition1d import Axis, NormalizedMF, mf_triangular
from .tensor import GridPartition, TensorPartition


@dataclass(frozen=True)
class Dataset:
    points: np.ndarray = field(compare=False)
    columns: tuple[str, ...] | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2:
            raise DimensionMismatch(f"dataset must be an N x d matrix, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("dataset entries must be finite")
        if self.columns is not None and len(self.columns) != pts.shape[1]:
            raise DimensionMismatch("column names do not match the data width")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def split(self, parts: int) -> list["Dataset"]:
        return [Dataset(chunk, self.columns) for chunk in np.array_split(self.points, parts)]


def _as_points(data, d: int) -> np.ndarray:
    pts = data.points if isinstance(data, Dataset) else Dataset(data).points
    if pts.shape[1] != d and pts.shape[0] > 0:
        raise DimensionMismatch(f"data has width {pts.shape[1]}, partition has d={d}")
    if pts.shape[0] == 0:
        pts = pts.reshape(0, d)
    return pts


class CompensatedSum:
    """Sum held as an unevaluated pair ``hi + lo``, ``hi`` correctly rounded.

    Both parts come from :func:`math.fsum`, so the pair carries the exact
    sum to about twice working precision.  Merging partial sums therefore
    reproduces the single-pass result to within one ulp of ``hi``.
    """

    __slots__ = ("hi", "lo")

    def __init__(self, hi: float = 0.0, lo: float = 0.0):
        self.hi = hi
        self.lo = lo

    @classmethod
    def of(cls, values) -> "CompensatedSum":
        vals = list(values)
        hi = math.fsum(vals)
        vals.append(-hi)
        return cls(hi, math.fsum(vals))

    def merge(self, other: "CompensatedSum") -> "CompensatedSum":
        parts = [self.hi, self.lo, other.hi, other.lo]
        hi = math.fsum(parts)
        parts.append(-hi)
        return CompensatedSum(hi, math.fsum(parts))

    @property
    def value(self) -> float:
        return self.hi

    def __repr__(self) -> str:
        return f"CompensatedSum({self.hi!r}, {self.lo!r})"


@dataclass
class FuzzyHistogram:
    partition: GridPartition
    sums: dict[tuple[int, ...], CompensatedSum]
    n_points: int
    dropped: int

    @property
    def n_retained(self) -> int:
        return self.n_points - self.dropped

    @property
    def accumulators(self) -> dict[tuple[int, ...], float]:
        return {k: s.value for k, s in sorted(self.sums.items())}

    def mass(self, set_id) -> float:
        s = self.sums.get(tuple(int(i) for i in set_id))
        return 0.0 if s is None else s.value

    def total_mass(self) -> float:
        return math.fsum(s.value for s in self.sums.values())

    def nonzero(self) -> list[tuple[tuple[int, ...], float]]:
        return [(k, v) for k, v in self.accumulators.items() if v != 0.0]

    def merge(self, other: "FuzzyHistogram") -> "FuzzyHistogram":
        sums = dict(self.sums)
        for k, s in other.sums.items():
            sums[k] = sums[k].merge(s) if k in sums else s
        return FuzzyHistogram(self.partition, sums, self.n_points + other.n_points, self.dropped + other.dropped)

    def _lookup(self):
        keys = np.array(sorted(self.sums), dtype=int).reshape(-1, self.partition.dim)
        flat = np.ravel_multi_index((keys - 1).T, tuple(self.partition.counts)) if len(keys) else np.zeros(0, int)
        masses = np.array([self.sums[tuple(k)].value for k in keys.tolist()])
        return flat, masses


@dataclass
class CrispHistogram:
    axes: tuple[Axis, ...]
    counts: np.ndarray
    n_points: int
    dropped: int

    @property
    def n_retained(self) -> int:
        return self.n_points - self.dropped

    def count(self, lower) -> int:
        return int(self.counts[tuple(int(i) - 1 for i in lower)])

    def merge(self, other: "CrispHistogram") -> "CrispHistogram":
        return CrispHistogram(self.axes, self.counts + other.counts, self.n_points + other.n_points, self.dropped + other.dropped)


def accumulate_fuzzy(tp: GridPartition, data) -> FuzzyHistogram:
    """Fuzzy histogram of ``data``; points outside the universe are only counted."""
    pts = _as_points(data, tp.dim)
    inside = tp.in_universe(pts) if len(pts) else np.zeros(0, bool)
    kept = pts[inside]
    sums: dict[tuple[int, ...], CompensatedSum] = {}
    if len(kept):
        ids, vals = tp.corner_memberships(kept)
        ids = ids.reshape(-1, tp.dim)
        vals = vals.ravel()
        flat = np.ravel_multi_index((ids - 1).T, tuple(tp.counts))
        order = np.argsort(flat, kind="stable")
        flat, vals = flat[order], vals[order]
        keys, starts = np.unique(flat, return_index=True)
        for key, group in zip(keys, np.split(vals, starts[1:])):
            set_id = tuple(int(i) + 1 for i in np.unravel_index(key, tuple(tp.counts)))
            sums[set_id] = CompensatedSum.of(group.tolist())
    return FuzzyHistogram(tp, sums, len(pts), int(len(pts) - len(kept)))


def accumulate_fuzzy_chunked(tp: GridPartition, data, chunks: int = 8, workers: int | None = None) -> FuzzyHistogram:
    """Accumulate disjoint chunks independently (optionally in threads) and merge."""
    pts = _as_points(data, tp.dim)
    parts = np.array_split(pts, max(1, chunks))
    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            partial = list(pool.map(lambda p: accumulate_fuzzy(tp, p), parts))
    else:
        partial = [accumulate_fuzzy(tp, p) for p in parts]
    out = partial[0]
    for h in partial[1:]:
        out = out.merge(h)
    return out


def _binning(axes: Sequence[Axis]) -> GridPartition:
    return GridPartition(axes, lambda u: np.zeros(len(u)), name="crisp")


def accumulate_crisp(axes: Sequence[Axis], data) -> CrispHistogram:
    """Classical histogram on the bins between adjacent nodes (half-open, closed upper face)."""
    axes = tuple(axes)
    grid = _binning(axes)
    pts = _as_points(data, grid.dim)
    inside = grid.in_universe(pts) if len(pts) else np.zeros(0, bool)
    kept = pts[inside]
    counts = np.zeros(tuple(int(p) - 1 for p in grid.counts), dtype=np.int64)
    if len(kept):
        lower = grid.locate_lower(kept) - 1
        np.add.at(counts, tuple(lower.T), 1)
    return CrispHistogram(axes, counts, len(pts), int(len(pts) - len(kept)))


def density_estimate(h: FuzzyHistogram | CrispHistogram, x):
    """Density at ``x`` (a point or an ``(n, d)`` array), in inverse volume units.

    Both estimators divide by ``N' * prod(c_j)`` where ``N'`` counts the
    retained points, so they are directly comparable.
    """
    if h.n_retained <= 0:
        raise EmptyHistogram("histogram holds no points")
    if isinstance(h, FuzzyHistogram):
        grid = h.partition
    else:
        grid = _binning(h.axes)
    arr = np.asarray(x, dtype=float)
    single = arr.ndim == 1
    pts = np.atleast_2d(arr)
    if pts.shape[1] != grid.dim:
        raise DimensionMismatch(f"expected points of dimension {grid.dim}")
    if not np.all(grid.in_universe(pts)):
        raise OutOfUniverse("density requested outside the universe")
    norm = h.n_retained * float(np.prod(grid.spacings))
    if isinstance(h, FuzzyHistogram):
        ids, vals = grid.corner_memberships(pts)
        flat = np.ravel_multi_index((ids.reshape(-1, grid.dim) - 1).T, tuple(grid.counts)).reshape(vals.shape)
        keys, masses = h._lookup()
        pos = np.clip(np.searchsorted(keys, flat), 0, max(len(keys) - 1, 0))
        found = (keys[pos] == flat) if len(keys) else np.zeros(flat.shape, bool)
        mass = np.where(found, masses[pos] if len(keys) else 0.0, 0.0)
        out = (mass * vals).sum(axis=1) / norm
    else:
        lower = grid.locate_lower(pts) - 1
        out = h.counts[tuple(lower.T)] / norm
    return float(out[0]) if single else out


# ---------------------------------------------------------------------------
# partition-shift experiment


def _template(axes: Sequence[Axis], mfs) -> GridPartition:
    if isinstance(mfs, GridPartition):
        return mfs.with_axes(axes)
    if mfs is None:
        mfs = [mf_triangular()] * len(axes)
    mfs = tuple(mfs)
    if len(mfs) != len(axes):
        raise DimensionMismatch(f"{len(axes)} axes but {len(mfs)} membership functions")
    if not all(isinstance(m, NormalizedMF) for m in mfs):
        raise TypeError("mfs must be NormalizedMF instances")
    return TensorPartition(axes, mfs)


def evaluation_grid(axes: Sequence[Axis], max_shift: float, resolution: int | None = None) -> np.ndarray:
    """Cell-centre grid over the region every shifted partition still covers."""
    d = len(axes)
    if resolution is None:
        resolution = {1: 1000, 2: 100}.get(d, 20)
    ticks = []
    for a in axes:
        lo = a.lower + max_shift * a.spacing
        hi = a.upper
        edges = np.linspace(lo, hi, resolution + 1)
        ticks.append((edges[:-1] + edges[1:]) / 2.0)
    mesh = np.meshgrid(*ticks, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _estimate(kind: str, axes, mfs, pts, where):
    if kind == "fuzzy":
        return density_estimate(accumulate_fuzzy(_template(axes, mfs), pts), where)
    if kind == "crisp":
        return density_estimate(accumulate_crisp(axes, pts), where)
    raise ValueError(f"unknown estimator kind {kind!r}")


def shift_sensitivity(kind: str, data, axes: Sequence[Axis], mfs=None, shifts: Sequence[float] = (), resolution: int | None = None):
    """Mean absolute change of the density estimate when all origins move by ``s * c_j``.

    Returns a list of ``(s, discrepancy)`` pairs, measured on one fixed
    evaluation grid shared by every shift.
    """
    axes = tuple(axes)
    shifts = [float(s) for s in shifts]
    for s in shifts:
        if not 0.0 <= s < 1.0:
            raise ValueError(f"shift fractions must lie in [0, 1), got {s}")
    if not shifts:
        return []
    pts = _as_points(data, len(axes))
    where = evaluation_grid(axes, max(shifts), resolution)
    base = _estimate(kind, axes, mfs, pts, where)
    rows = []
    for s in shifts:
        moved = tuple(a.shifted(s * a.spacing) for a in axes)
        est = base if s == 0.0 else _estimate(kind, moved, mfs, pts, where)
        rows.append((s, float(np.mean(np.abs(est - base)))))
    return rows


def compare_shifts(data, axes: Sequence[Axis], mfs=None, shifts: Sequence[float] = (), resolution: int | None = None):
    """Rows of ``(s, crisp discrepancy, fuzzy discrepancy)``."""
    crisp = shift_sensitivity("crisp", data, axes, mfs, shifts, resolution)
    fuzzy = shift_sensitivity("fuzzy", data, axes, mfs, shifts, resolution)
    return [(s, c, f) for (s, c), (_, f) in zip(crisp, fuzzy)]
