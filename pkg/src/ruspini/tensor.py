"""Grid partitions of arbitrary dimension.

A :class:`GridPartition` places one fuzzy set on every node of a regular
grid and obtains all of them by translating a single centralized
membership function.  :class:`TensorPartition` is the product construction
``mu(x) = prod_j eta_j(x_j / c_j)``, which is a strong-uniform partition
for any choice of valid one-dimensional shapes ``eta_j``.

Fuzzy sets are never materialized: a set is named by its 1-based index
tuple and evaluated on demand, so cost is ``O(d)`` per point regardless
of how many sets the grid holds.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionMismatch, IndexOutOfRange, InvalidAxis, OutOfUniverse
from .partition1d import Axis, NormalizedMF, validate_mf

FuzzySetId = tuple  # (i_1, ..., i_d), 1-based


@dataclass(frozen=True)
class Bin:
    """Half-open box between node ``lower`` and node ``lower + 1`` on every axis."""

    lower: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.lower)


def corner_ids(b: Bin) -> list[FuzzySetId]:
    """The ``2**d`` fuzzy sets cornering ``b``, in lexicographic order."""
    return [tuple(i + s for i, s in zip(b.lower, bits)) for bits in itertools.product((0, 1), repeat=b.dim)]


def _points(x, d: int) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    single = arr.ndim == 1
    if arr.ndim == 0 or arr.ndim > 2:
        raise DimensionMismatch(f"expected a point or an (n, {d}) array, got shape {arr.shape}")
    arr = np.atleast_2d(arr)
    if arr.shape[1] != d:
        raise DimensionMismatch(f"expected points of dimension {d}, got {arr.shape[1]}")
    return arr, single


class GridPartition:
    """Translates of one centralized membership function over a node grid.

    ``kernel`` receives offsets measured in units of each axis spacing,
    shape ``(n, d)``, and returns ``n`` membership degrees.
    """

    def __init__(self, axes: Sequence[Axis], kernel: Callable[[np.ndarray], np.ndarray], name: str = "custom"):
        axes = tuple(axes)
        if not axes:
            raise DimensionMismatch("a partition needs at least one axis")
        for a in axes:
            if not isinstance(a, Axis):
                raise InvalidAxis(f"expected Axis, got {type(a).__name__}")
        self.axes = axes
        self.kernel = kernel
        self.name = name
        self.origins = np.array([a.origin for a in axes])
        self.spacings = np.array([a.spacing for a in axes])
        self.counts = np.array([a.count for a in axes])
        self.lower = self.origins.copy()
        self.upper = np.array([a.upper for a in axes])

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r}, d={self.dim})"

    @property
    def dim(self) -> int:
        return len(self.axes)

    @property
    def n_sets(self) -> int:
        return int(np.prod(self.counts))

    def with_axes(self, axes: Sequence[Axis]) -> "GridPartition":
        return GridPartition(axes, self.kernel, self.name)

    # -- evaluation -------------------------------------------------------

    def centralized_mu(self, offset):
        """Membership of the set centred at the origin, at ``offset`` (data units)."""
        pts, single = _points(offset, self.dim)
        with np.errstate(all="ignore"):
            out = np.asarray(self.kernel(pts / self.spacings), dtype=float)
        return float(out[0]) if single else out

    def check_id(self, set_id) -> tuple[int, ...]:
        set_id = tuple(int(i) for i in set_id)
        if len(set_id) != self.dim:
            raise DimensionMismatch(f"fuzzy set id {set_id} has length {len(set_id)}, partition has d={self.dim}")
        for i, p in zip(set_id, self.counts):
            if not 1 <= i <= p:
                raise IndexOutOfRange(f"fuzzy set id {set_id} outside 1..{tuple(int(c) for c in self.counts)}")
        return set_id

    def core(self, set_id) -> np.ndarray:
        set_id = self.check_id(set_id)
        return np.array([a.node(i) for a, i in zip(self.axes, set_id)])

    def cores(self, ids: np.ndarray) -> np.ndarray:
        """Vectorized :meth:`core` for an ``(n, d)`` integer array (no range check)."""
        return self.origins + (np.asarray(ids) - 1) * self.spacings

    def in_universe(self, x) -> np.ndarray:
        pts, _ = _points(x, self.dim)
        return np.all((pts >= self.lower) & (pts <= self.upper), axis=1)

    def membership(self, set_id, x):
        """Degree of ``x`` in the set ``set_id``; zero outside the universe."""
        core = self.core(set_id)
        pts, single = _points(x, self.dim)
        out = self._member_at(np.broadcast_to(core, pts.shape), pts)
        return float(out[0]) if single else out

    def memberships(self, ids, x) -> np.ndarray:
        """Row-wise membership of ``x[i]`` in set ``ids[i]``; both ``(n, d)``."""
        pts, _ = _points(x, self.dim)
        ids = np.asarray(ids, dtype=int).reshape(pts.shape)
        if np.any(ids < 1) or np.any(ids > self.counts):
            raise IndexOutOfRange("fuzzy set id outside the grid")
        return self._member_at(self.cores(ids), pts)

    def _member_at(self, cores: np.ndarray, pts: np.ndarray) -> np.ndarray:
        inside = np.all((pts >= self.lower) & (pts <= self.upper), axis=1)
        with np.errstate(all="ignore"):
            val = np.asarray(self.kernel((pts - cores) / self.spacings), dtype=float)
        return np.where(inside, val, 0.0)

    # -- bins -------------------------------------------------------------

    def locate_lower(self, x) -> np.ndarray:
        """Lower-corner indices of the half-open bins holding each row of ``x``."""
        pts, _ = _points(x, self.dim)
        if not np.all(self.in_universe(pts)):
            bad = pts[~self.in_universe(pts)][0]
            raise OutOfUniverse(f"point {tuple(float(v) for v in bad)} lies outside the universe")
        idx = np.floor((pts - self.origins) / self.spacings).astype(int) + 1
        idx = np.clip(idx, 1, self.counts - 1)
        # floor() can land one bin off when a point sits on a node
        lo = self.cores(idx)
        idx = np.where(pts < lo, idx - 1, idx)
        hi = self.origins + idx * self.spacings
        idx = np.where(pts >= hi, idx + 1, idx)
        return np.clip(idx, 1, self.counts - 1)

    def locate_bin(self, x) -> Bin:
        pts, single = _points(x, self.dim)
        if not single:
            raise DimensionMismatch("locate_bin takes a single point; use locate_lower for arrays")
        return Bin(tuple(int(i) for i in self.locate_lower(pts)[0]))

    def corner_memberships(self, x, lower: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Corner ids ``(n, 2**d, d)`` and memberships ``(n, 2**d)`` for points in the universe."""
        pts, _ = _points(x, self.dim)
        if lower is None:
            lower = self.locate_lower(pts)
        offsets = np.array(list(itertools.product((0, 1), repeat=self.dim)), dtype=int)
        ids = lower[:, None, :] + offsets[None, :, :]
        vals = np.empty(ids.shape[:2])
        for c in range(offsets.shape[0]):
            vals[:, c] = self._member_at(self.cores(ids[:, c, :]), pts)
        return ids, vals

    def sum_over_corners(self, x):
        """Sum of memberships of the ``2**d`` sets cornering the bin of ``x``."""
        pts, single = _points(x, self.dim)
        _, vals = self.corner_memberships(pts)
        out = vals.sum(axis=1)
        return float(out[0]) if single else out

    def bin_corner_sum(self, b: Bin, x) -> np.ndarray:
        """Corner sum around a fixed bin, also on its closed upper faces."""
        pts, single = _points(x, self.dim)
        lower = np.broadcast_to(np.asarray(b.lower, dtype=int), pts.shape)
        _, vals = self.corner_memberships(pts, lower)
        out = vals.sum(axis=1)
        return float(out[0]) if single else out

    def all_ids(self):
        return itertools.product(*(range(1, int(p) + 1) for p in self.counts))


class TensorPartition(GridPartition):
    """Product construction from one normalized shape per axis."""

    def __init__(self, axes: Sequence[Axis], mfs: Sequence[NormalizedMF]):
        self.mfs = tuple(mfs)
        name = "x".join(mf.name for mf in self.mfs)
        super().__init__(axes, self._product, name)
        if len(self.mfs) != self.dim:
            raise DimensionMismatch(f"{self.dim} axes but {len(self.mfs)} membership functions")

    def _product(self, u: np.ndarray) -> np.ndarray:
        out = np.ones(u.shape[0])
        for j, mf in enumerate(self.mfs):
            out = out * mf(u[:, j])
        return out

    def with_axes(self, axes: Sequence[Axis]) -> "TensorPartition":
        return TensorPartition(axes, self.mfs)


def build_tensor(axes: Sequence[Axis], mfs: Sequence[NormalizedMF], tolerance: float = 1e-9) -> TensorPartition:
    """Validate the inputs and assemble the product partition."""
    axes, mfs = tuple(axes), tuple(mfs)
    if not axes:
        raise DimensionMismatch("at least one axis is required")
    if len(axes) != len(mfs):
        raise DimensionMismatch(f"{len(axes)} axes but {len(mfs)} membership functions")
    for mf in mfs:
        validate_mf(mf, tolerance)
    return TensorPartition(axes, mfs)


# thin functional aliases


def centralized_mu(tp: GridPartition, offset):
    return tp.centralized_mu(offset)


def membership(tp: GridPartition, set_id, x):
    return tp.membership(set_id, x)


def core(tp: GridPartition, set_id) -> np.ndarray:
    return tp.core(set_id)


def locate_bin(tp: GridPartition, x) -> Bin:
    return tp.locate_bin(x)


def sum_over_corners(tp: GridPartition, x):
    return tp.sum_over_corners(x)
