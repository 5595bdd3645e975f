"""Numerical verification of the seven conditions for d-dimensional partitions.

The verifier only needs a centralized membership function (a vectorized
callable on ``(n, d)`` offsets in data units) and the per-axis spacings, so
tensor and non-tensor constructions are checked the same way.

Set-level conditions (translation symmetry, sum to one) are evaluated on a
synthetic partition with three nodes per axis, ``0, c_j, 2 c_j``.  By
default its sets are translates of ``mu``; a ``members`` callable can
replace them to check partitions whose sets are not all translates.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .errors import DimensionMismatch
from .partition1d import CONTINUITY_REFINE, CONTINUITY_SLACK, Partition1D, check_definition1
from .report import Check, ConditionReport
from .tensor import GridPartition

DEFINITION2_CONDITIONS = (
    "nonnegative_continuous",
    "translation",
    "mirror_symmetry",
    "core",
    "support",
    "strong_uniformity",
    "radial_monotonicity",
)

MAX_GRID_POINTS = 1_000_000
MAX_EXTRA_RANDOM = 100_000
MAX_CONTINUITY_LINES = 256
MAX_SIGN_PATTERNS = 64


@dataclass(frozen=True)
class VerifyConfig:
    samples_per_axis: int = 33
    random_points: int = 1000
    tolerance: float = 1e-9
    epsilons: tuple[float, ...] = (0.01, 0.1, 1.0)
    seed: int = 42
    chunk_size: int = 65536
    workers: int = 1

    def __post_init__(self):
        if self.samples_per_axis < 3:
            raise ValueError("samples_per_axis must be at least 3")
        if self.random_points < 0:
            raise ValueError("random_points must be non-negative")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if not self.epsilons or any(not e > 0 for e in self.epsilons):
            raise ValueError("epsilons must be positive")
        object.__setattr__(self, "epsilons", tuple(float(e) for e in self.epsilons))


def grid_plan(samples_per_axis: int, random_points: int, d: int) -> tuple[int, int]:
    """Per-axis grid size and random-point count after applying the grid cap."""
    n = samples_per_axis
    if n**d > MAX_GRID_POINTS:
        n = max(2, int(np.floor(MAX_GRID_POINTS ** (1.0 / d) + 1e-9)))
        random_points += min(samples_per_axis**d - n**d, MAX_EXTRA_RANDOM)
    return n, random_points


def _grid_chunks(lo: np.ndarray, hi: np.ndarray, n: int, chunk: int) -> Iterator[np.ndarray]:
    d = lo.size
    total = n**d
    axes = np.linspace(0.0, 1.0, n)
    for start in range(0, total, chunk):
        flat = np.arange(start, min(start + chunk, total))
        idx = np.stack(np.unravel_index(flat, (n,) * d), axis=1)
        yield lo + axes[idx] * (hi - lo)


def _outside_random(rng, c: np.ndarray, count: int) -> np.ndarray:
    """Random points in ``[-2c, 2c]`` with at least one coordinate beyond ``c``."""
    d = c.size
    pts = rng.uniform(-2 * c, 2 * c, size=(count, d))
    axis = rng.integers(0, d, size=count)
    mag = rng.uniform(1.0, 2.0, size=count)
    sign = rng.choice([-1.0, 1.0], size=count)
    rows = np.arange(count)
    pts[rows, axis] = sign * mag * c[axis]
    # uniform(1, 2) may return exactly 1.0; nudge so the point is strictly outside
    pts[rows, axis] = np.where(mag == 1.0, sign * np.nextafter(c[axis], np.inf), pts[rows, axis])
    return pts


def verify_definition2(
    mu,
    spacings=None,
    cfg: VerifyConfig | None = None,
    members: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None,
) -> ConditionReport:
    """Check the seven partition conditions for a centralized membership ``mu``.

    ``mu`` may also be a :class:`GridPartition`, whose centralized function
    and spacings are used.  Never raises for failing conditions; each one
    becomes a report entry with its largest deviation and a witness point.
    """
    cfg = cfg or VerifyConfig()
    if isinstance(mu, GridPartition):
        if spacings is None:
            spacings = mu.spacings
        mu = mu.centralized_mu
    if spacings is None:
        raise DimensionMismatch("spacings are required for a bare membership callable")
    c = np.atleast_1d(np.asarray(spacings, dtype=float))
    if c.ndim != 1 or c.size < 1:
        raise DimensionMismatch("spacings must be a non-empty vector")
    d = c.size
    probe = np.asarray(mu(np.zeros((1, d))), dtype=float)
    if probe.shape != (1,):
        raise DimensionMismatch(f"membership callable returned shape {probe.shape} for one {d}-D point")

    def mu_eval(x):
        with np.errstate(all="ignore"):
            return np.asarray(mu(x), dtype=float)

    def translate(ids, x):
        return mu_eval(x - (ids - 1) * c)

    members_eval = members or translate
    tol = cfg.tolerance
    rng = np.random.default_rng(cfg.seed)
    n, n_random = grid_plan(cfg.samples_per_axis, cfg.random_points, d)

    # Random draws happen up front, in a fixed order, so reports are reproducible.
    shape_random = rng.uniform(-c, c, size=(n_random, d))
    outside_random = _outside_random(rng, c, n_random)
    omega_random = rng.uniform(0.0, 2 * c, size=(n_random, d))
    omega_grid_ids = rng.integers(1, 4, size=(n**d, d))
    omega_random_ids = rng.integers(1, 4, size=(n_random, d))
    line_picks = [_pick_lines(rng, n, d, j) for j in range(d)]

    signs = np.array(list(itertools.product((1.0, -1.0), repeat=d)))
    if signs.shape[0] > MAX_SIGN_PATTERNS:
        signs = np.vstack([signs[:1], signs[-1:], rng.choice([1.0, -1.0], size=(MAX_SIGN_PATTERNS - 2, d))])
    corner_bits = np.array(list(itertools.product((0, 1), repeat=d)), dtype=int)

    def fresh():
        return {i + 1: Check(i + 1, name, tol) for i, name in enumerate(DEFINITION2_CONDITIONS)}

    def shape_task(pts):
        ck = fresh()
        base = mu_eval(pts)
        ck[1].update(np.maximum(0.0, -base), pts, [base])
        for s in signs[1:]:
            flipped = mu_eval(pts * s)
            ck[3].update(np.abs(flipped - base), pts, [base, flipped])
        for eps in cfg.epsilons:
            scaled = mu_eval(pts * (1.0 + eps))
            ck[7].update(np.maximum(0.0, scaled - base), pts, [base, scaled, np.full(len(pts), eps)])
        return ck

    def outside_task(pts):
        ck = fresh()
        beyond = np.any(np.abs(pts) > c, axis=1)
        pts = pts[beyond]
        if len(pts):
            vals = mu_eval(pts)
            ck[5].update(np.abs(vals), pts, [vals])
            ck[1].update(np.maximum(0.0, -vals), pts, [vals])
        return ck

    def omega_task(pts, rand_ids):
        ck = fresh()
        lower = np.clip(np.floor(pts / c).astype(int) + 1, 1, 2)
        total = np.zeros(len(pts))
        for bits in corner_bits:
            ids = lower + bits
            got = members_eval(ids, pts)
            total = total + got
            if members is not None:
                ck[2].update(np.abs(got - translate(ids, pts)), pts, [got])
        ck[6].update(np.abs(total - 1.0), pts, [total])
        if members is not None:
            got = members_eval(rand_ids, pts)
            ck[2].update(np.abs(got - translate(rand_ids, pts)), pts, [got])
        return ck

    def continuity_task(j):
        ck = fresh()
        excess, pts, jumps = _continuity_along(mu_eval, c, n, j, line_picks[j])
        ck[1].update(excess, pts, [jumps])
        return ck

    tasks = []
    cs = cfg.chunk_size
    for pts in _grid_chunks(-c, c, n, cs):
        tasks.append((shape_task, (pts,)))
    for pts in _random_chunks_from(shape_random, cs):
        tasks.append((shape_task, (pts,)))
    for pts in _grid_chunks(-2 * c, 2 * c, n, cs):
        tasks.append((outside_task, (pts,)))
    for pts in _random_chunks_from(outside_random, cs):
        tasks.append((outside_task, (pts,)))
    start = 0
    for pts in _grid_chunks(np.zeros(d), 2 * c, n, cs):
        tasks.append((omega_task, (pts, omega_grid_ids[start : start + len(pts)])))
        start += len(pts)
    for start in range(0, n_random, cs):
        tasks.append((omega_task, (omega_random[start : start + cs], omega_random_ids[start : start + cs])))
    for j in range(d):
        tasks.append((continuity_task, (j,)))

    if cfg.workers > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            partials = list(pool.map(lambda t: t[0](*t[1]), tasks))
    else:
        partials = [fn(*args) for fn, args in tasks]

    checks = fresh()
    origin = np.zeros((1, d))
    at_zero = mu_eval(origin)
    checks[4].update(np.abs(at_zero - 1.0), origin, [at_zero])
    for part in partials:
        for k in checks:
            checks[k] = checks[k].merge(part[k])
    if members is None:
        checks[2].detail = "sets are translates of mu by construction"
    return ConditionReport("nd", tuple(checks[k].result() for k in sorted(checks)))


def _random_chunks_from(pts: np.ndarray, chunk: int) -> Iterator[np.ndarray]:
    for start in range(0, len(pts), chunk):
        yield pts[start : start + chunk]


def _pick_lines(rng, n: int, d: int, j: int) -> np.ndarray:
    """Grid indices (over the other axes) of the lines checked along axis ``j``."""
    others = d - 1
    if others == 0:
        return np.zeros((1, 0), dtype=int)
    total = n**others
    if total <= MAX_CONTINUITY_LINES:
        flat = np.arange(total)
    else:
        flat = rng.choice(total, size=MAX_CONTINUITY_LINES, replace=False)
        # keep the line through the origin when the grid contains it
        if n % 2 == 1:
            centre = np.ravel_multi_index((n // 2,) * others, (n,) * others)
            flat[0] = centre
    return np.stack(np.unravel_index(flat, (n,) * others), axis=1)


def _continuity_along(mu_eval, c: np.ndarray, n: int, j: int, line_idx: np.ndarray):
    """Excess of fine-grid jumps along axis ``j`` over a coarse-grid Lipschitz bound."""
    d = c.size
    others = [k for k in range(d) if k != j]
    unit = np.linspace(-1.0, 1.0, n)
    step = 2.0 * c[j] / (n - 1)
    half = int(np.ceil(1.5 * c[j] / step))
    coarse = np.arange(-half, half + 1) * step
    fine = np.linspace(coarse[0], coarse[-1], (coarse.size - 1) * CONTINUITY_REFINE + 1)
    fine_step = fine[1] - fine[0]

    def line_points(base_idx, ts):
        pts = np.zeros((ts.size, d))
        for k, i in zip(others, base_idx):
            pts[:, k] = unit[i] * c[k]
        pts[:, j] = ts
        return pts

    lipschitz = 0.0
    for base in line_idx:
        yc = mu_eval(line_points(base, coarse))
        lipschitz = max(lipschitz, float(np.nanmax(np.abs(np.diff(yc)))) / step)
    excess, where, jumps = [], [], []
    for base in line_idx:
        pts = line_points(base, fine)
        yf = mu_eval(pts)
        jump = np.abs(np.diff(yf))
        excess.append(jump - CONTINUITY_SLACK * lipschitz * fine_step)
        where.append(pts[:-1])
        jumps.append(jump)
    return np.concatenate(excess), np.vstack(where), np.concatenate(jumps)


def verify_partition(partition: GridPartition, cfg: VerifyConfig | None = None) -> ConditionReport:
    return verify_definition2(partition.centralized_mu, partition.spacings, cfg)


def verify_definition1(p: Partition1D, cfg: VerifyConfig | None = None) -> ConditionReport:
    cfg = cfg or VerifyConfig()
    return check_definition1(p, cfg.samples_per_axis, cfg.tolerance)
