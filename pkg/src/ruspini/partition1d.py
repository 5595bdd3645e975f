"""One-dimensional strong-uniform fuzzy partitions.

A partition is described by equally spaced nodes and a single *normalized*
membership function ``eta``: the shape of every fuzzy set once node
positions and spacing are factored out.  Fuzzy set ``k`` has membership
``eta((x - m_k) / h)`` on its two adjacent bins and zero elsewhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import IndexOutOfRange, InvalidAxis, InvalidMF
from .report import Check, ConditionReport

DEFAULT_TOLERANCE = 1e-9
CONTINUITY_REFINE = 16
CONTINUITY_SLACK = 4.0


def vectorize(func: Callable) -> Callable[[np.ndarray], np.ndarray]:
    """Wrap ``func`` so it maps float arrays elementwise, whatever it accepts."""

    def wrapped(x):
        x = np.asarray(x, dtype=float)
        try:
            y = np.asarray(func(x), dtype=float)
            if y.shape == x.shape:
                return y
            if y.ndim == 0:
                return np.full(x.shape, float(y))
        except (TypeError, ValueError):
            pass
        return np.vectorize(lambda t: float(func(float(t))), otypes=[float])(x)

    return wrapped


@dataclass(frozen=True)
class NormalizedMF:
    """A normalized membership function: shape only, unit spacing.

    ``func`` must accept float arrays.  Construction does not validate;
    use :func:`validate_mf` (or the registry) for that.
    """

    func: Callable[[np.ndarray], np.ndarray] = field(compare=False)
    name: str = "custom"

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        with np.errstate(all="ignore"):
            out = np.asarray(self.func(arr), dtype=float)
        if arr.ndim == 0:
            return float(out)
        return out

    def __repr__(self) -> str:
        return f"NormalizedMF({self.name!r})"


def _triangular(x):
    return np.maximum(0.0, 1.0 - np.abs(x))


def _cosine(x):
    return np.where(np.abs(x) < 1.0, (np.cos(np.pi * x) + 1.0) / 2.0, 0.0)


_TRIANGULAR = NormalizedMF(_triangular, "triangular")
_COSINE = NormalizedMF(_cosine, "cosine")


def mf_triangular() -> NormalizedMF:
    return _TRIANGULAR


def mf_cosine() -> NormalizedMF:
    return _COSINE


# ---------------------------------------------------------------------------
# validation


def continuity_excess(f, lo: float, hi: float, coarse_step: float, refine=CONTINUITY_REFINE, slack=CONTINUITY_SLACK):
    """Fine-grid jumps in excess of a Lipschitz bound estimated on a coarse grid.

    Returns ``(excess, left_points, values)`` where ``excess[i]`` is how much
    the jump between fine samples ``i`` and ``i+1`` exceeds
    ``slack * L * fine_step`` (``L`` = largest coarse slope).  Any positive
    entry larger than the tolerance marks a numerical discontinuity.
    """
    n_coarse = max(2, int(round((hi - lo) / coarse_step)) + 1)
    coarse = np.linspace(lo, hi, n_coarse)
    step = coarse[1] - coarse[0]
    yc = f(coarse)
    lipschitz = float(np.max(np.abs(np.diff(yc)))) / step
    fine = np.linspace(lo, hi, (n_coarse - 1) * refine + 1)
    yf = f(fine)
    fine_step = fine[1] - fine[0]
    jumps = np.abs(np.diff(yf))
    excess = jumps - slack * lipschitz * fine_step
    return excess, fine[:-1], jumps


MF_INVARIANTS = ("evaluation", "core", "support", "symmetry", "monotonicity", "complement", "continuity")


def mf_violations(mf: NormalizedMF, tolerance: float = DEFAULT_TOLERANCE, seed: int = 0) -> list[tuple[str, float, float]]:
    """All violated shape invariants as ``(label, witness, deviation)``, in check order.

    The support invariant has two sides: ``eta`` must vanish for
    ``|x| >= 1``, and must stay positive on ``|x| <= 1/2`` (symmetry,
    monotonicity and the complement law force ``eta >= 1/2`` there, so a
    shape that dies out earlier has too small a support).
    """
    found = []

    def record(label, xs, dev):
        dev = np.where(np.isnan(dev), np.inf, dev)
        i = int(np.argmax(dev))
        if dev[i] > tolerance:
            found.append((label, float(np.asarray(xs).ravel()[i]), float(dev[i])))

    grid = np.linspace(-3.0, 3.0, 12001)
    values = mf(grid)
    if not np.all(np.isfinite(values)):
        bad = int(np.argmax(~np.isfinite(values)))
        found.append(("evaluation", float(grid[bad]), math.inf))
        return found

    record("core", np.array([0.0]), np.array([abs(mf(0.0) - 1.0)]))

    outside = np.concatenate([np.linspace(1.0, 3.0, 2001), -np.linspace(1.0, 3.0, 2001)])
    record("support", outside, np.abs(mf(outside)))
    inner = np.linspace(-0.5, 0.5, 2001)
    # deviation measures how far eta is from being strictly positive
    inner_dev = np.where(mf(inner) > 0.0, 0.0, 0.5 - mf(inner))
    record("support", inner, inner_dev)

    half = np.linspace(0.0, 1.5, 6001)
    record("symmetry", half, np.abs(mf(half) - mf(-half)))

    unit = np.linspace(0.0, 1.0, 4097)
    yu = mf(unit)
    record("monotonicity", unit[1:], np.diff(yu))

    rng = np.random.default_rng(seed)
    u = np.concatenate([unit, rng.uniform(0.0, 1.0, 10_000)])
    record("complement", u, np.abs(mf(u) + mf(1.0 - u) - 1.0))

    excess, pts, _ = continuity_excess(mf, -1.5, 1.5, 1.0 / 256)
    record("continuity", pts, excess)
    # support violations on both sides collapse into one entry
    seen, out = set(), []
    for item in found:
        if item[0] not in seen:
            seen.add(item[0])
            out.append(item)
    return out


def validate_mf(mf: NormalizedMF, tolerance: float = DEFAULT_TOLERANCE) -> NormalizedMF:
    """Return ``mf`` unchanged, or raise :class:`InvalidMF` for the first violation."""
    violations = mf_violations(mf, tolerance)
    if violations:
        label, witness, dev = violations[0]
        raise InvalidMF(label, witness, f"deviation {dev:.3g}")
    return mf


def normalize(mu: Callable, spacing: float, name: str = "normalized", tolerance: float = DEFAULT_TOLERANCE) -> NormalizedMF:
    """Rescale a centralized membership function to unit spacing: ``eta(x) = mu(spacing * x)``."""
    if not (spacing > 0 and math.isfinite(spacing)):
        raise InvalidAxis(f"spacing must be positive and finite, got {spacing!r}")
    mu_vec = vectorize(mu)
    eta = NormalizedMF(lambda x: mu_vec(spacing * np.asarray(x, dtype=float)), name)
    return validate_mf(eta, tolerance)


# ---------------------------------------------------------------------------
# registry of admitted shapes

_REGISTRY: dict[str, NormalizedMF] = {"triangular": _TRIANGULAR, "cosine": _COSINE}


def register_mf(name: str, mf: NormalizedMF, tolerance: float = DEFAULT_TOLERANCE) -> NormalizedMF:
    """Validate ``mf`` and add it to the registry under ``name``."""
    if not name.isidentifier():
        raise ValueError(f"registry names must be identifiers, got {name!r}")
    validate_mf(mf, tolerance)
    if mf.name != name:
        mf = NormalizedMF(mf.func, name)
    _REGISTRY[name] = mf
    return mf


def get_mf(name: str) -> NormalizedMF:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise KeyError(f"no membership function registered as {name!r}") from None


def registry_names() -> tuple[str, ...]:
    return tuple(_REGISTRY)


# ---------------------------------------------------------------------------
# axes and 1-D partitions


@dataclass(frozen=True)
class Axis:
    """Equally spaced nodes ``origin + (i - 1) * spacing`` for ``i = 1..count``."""

    origin: float
    spacing: float
    count: int

    def __post_init__(self):
        if not math.isfinite(self.origin):
            raise InvalidAxis(f"origin must be finite, got {self.origin!r}")
        if not (math.isfinite(self.spacing) and self.spacing > 0):
            raise InvalidAxis(f"spacing must be positive and finite, got {self.spacing!r}")
        if int(self.count) != self.count or self.count < 3:
            raise InvalidAxis(f"an axis needs at least 3 nodes, got {self.count!r}")
        object.__setattr__(self, "origin", float(self.origin))
        object.__setattr__(self, "spacing", float(self.spacing))
        object.__setattr__(self, "count", int(self.count))

    def node(self, i: int) -> float:
        if not 1 <= i <= self.count:
            raise IndexOutOfRange(f"node index {i} outside 1..{self.count}")
        return self.origin + (i - 1) * self.spacing

    @property
    def nodes(self) -> np.ndarray:
        return self.origin + np.arange(self.count) * self.spacing

    @property
    def lower(self) -> float:
        return self.origin

    @property
    def upper(self) -> float:
        return self.origin + (self.count - 1) * self.spacing

    def shifted(self, offset: float) -> "Axis":
        return Axis(self.origin + offset, self.spacing, self.count)


@dataclass(frozen=True)
class Partition1D:
    """Fuzzy sets on ``nodes`` sharing one normalized shape ``mf``.

    Uniform partitions come from :meth:`from_axis`.  Arbitrary increasing
    node sets are accepted so the checker can report spacing violations;
    each side of a set is then scaled by its own adjacent gap.
    """

    nodes: np.ndarray = field(compare=False)
    mf: NormalizedMF
    spacing: float | None = None

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < 3:
            raise InvalidAxis("a 1-D partition needs at least 3 nodes")
        if not np.all(np.diff(nodes) > 0):
            raise InvalidAxis("nodes must be strictly increasing")
        object.__setattr__(self, "nodes", nodes)

    @classmethod
    def from_axis(cls, axis: Axis, mf: NormalizedMF) -> "Partition1D":
        return cls(axis.nodes, mf, axis.spacing)

    @property
    def count(self) -> int:
        return int(self.nodes.size)

    @property
    def lower(self) -> float:
        return float(self.nodes[0])

    @property
    def upper(self) -> float:
        return float(self.nodes[-1])

    @property
    def step(self) -> float:
        """Nominal spacing ``h``: the declared one, else the first gap."""
        return self.spacing if self.spacing is not None else float(self.nodes[1] - self.nodes[0])

    def gaps(self, k: int) -> tuple[float, float]:
        if self.spacing is not None:
            return self.spacing, self.spacing
        gaps = np.diff(self.nodes)
        left = gaps[k - 2] if k >= 2 else gaps[0]
        right = gaps[k - 1] if k <= self.count - 1 else gaps[-1]
        return float(left), float(right)


def membership_1d(p: Partition1D, k: int, x):
    """Membership of ``x`` in fuzzy set ``k`` (1-based); zero outside the universe."""
    if not 1 <= k <= p.count:
        raise IndexOutOfRange(f"fuzzy set index {k} outside 1..{p.count}")
    arr = np.asarray(x, dtype=float)
    m = p.nodes[k - 1]
    h_left, h_right = p.gaps(k)
    d = arr - m
    h = np.where(d < 0, h_left, h_right)
    inside = (np.abs(d) < h) & (arr >= p.lower) & (arr <= p.upper)
    out = np.where(inside, p.mf(np.where(inside, d / h, 0.0)), 0.0)
    if arr.ndim == 0:
        return float(out)
    return out


DEFINITION1_CONDITIONS = (
    "core",
    "support",
    "continuity",
    "monotonicity",
    "coverage",
    "sum_to_one",
    "uniform_spacing",
    "symmetry",
    "translation",
)


def _bin_samples(p: Partition1D, samples_per_bin: int) -> np.ndarray:
    pieces = []
    for a, b in zip(p.nodes[:-1], p.nodes[1:]):
        pieces.append(np.linspace(a, b, samples_per_bin))
        pieces.append([(a + b) / 2.0])
    return np.unique(np.concatenate(pieces))


def check_definition1(p: Partition1D, samples_per_bin: int = 33, tolerance: float = DEFAULT_TOLERANCE) -> ConditionReport:
    """Check the nine conditions of a 1-D strong-uniform fuzzy partition.

    Failures are report entries carrying a witness point, never exceptions.
    Symmetry and translation are checked on the interior sets ``2..p-1``;
    boundary sets are truncated at the edges of the universe.
    """
    if samples_per_bin < 2:
        raise ValueError("samples_per_bin must be at least 2")
    checks = {name: Check(i + 1, name, tolerance) for i, name in enumerate(DEFINITION1_CONDITIONS)}
    n, h = p.count, p.step
    xs = _bin_samples(p, samples_per_bin)
    table = np.vstack([membership_1d(p, k, xs) for k in range(1, n + 1)])

    nodes = p.nodes
    core_vals = np.array([membership_1d(p, k, nodes[k - 1]) for k in range(1, n + 1)])
    checks["core"].update(np.abs(core_vals - 1.0), nodes, [core_vals])

    # raw shape beyond the adjacent nodes, for sides that lie inside the universe
    u = np.linspace(1.0, 2.0, samples_per_bin)
    for k in range(1, n + 1):
        h_left, h_right = p.gaps(k)
        m = nodes[k - 1]
        if k < n:
            checks["support"].update(np.abs(p.mf(u)), m + u * h_right, [p.mf(u)])
        if k > 1:
            checks["support"].update(np.abs(p.mf(-u)), m - u * h_left, [p.mf(-u)])

    coarse = min(np.diff(nodes)) / max(samples_per_bin - 1, 1)
    for k in range(1, n + 1):
        excess, pts, jumps = continuity_excess(lambda t: membership_1d(p, k, t), p.lower, p.upper, coarse)
        checks["continuity"].update(excess, pts, [jumps])

    for k in range(1, n + 1):
        m = nodes[k - 1]
        if k > 1:
            left = np.linspace(nodes[k - 2], m, samples_per_bin)
            y = membership_1d(p, k, left)
            checks["monotonicity"].update(-np.diff(y), left[1:], [y[1:]])
        if k < n:
            right = np.linspace(m, nodes[k], samples_per_bin)
            y = membership_1d(p, k, right)
            checks["monotonicity"].update(np.diff(y), right[1:], [y[1:]])

    top = table.max(axis=0)
    checks["coverage"].update(np.where(top > 0.0, 0.0, 1.0), xs, [top])

    total = table.sum(axis=0)
    checks["sum_to_one"].update(np.abs(total - 1.0), xs, [total])

    gaps = np.diff(nodes)
    checks["uniform_spacing"].update(np.abs(gaps - h), nodes[:-1], [gaps])

    offs = np.linspace(0.0, h, samples_per_bin)
    for k in range(2, n):
        m = nodes[k - 1]
        lo, hi = membership_1d(p, k, m - offs), membership_1d(p, k, m + offs)
        checks["symmetry"].update(np.abs(lo - hi), m + offs, [lo, hi])

    for k in range(2, n):
        seg = np.linspace(nodes[k - 1], nodes[k], samples_per_bin)
        # seg - h lies in the universe; clipping only undoes rounding at its edge
        back = np.clip(seg - h, p.lower, p.upper)
        a, b = membership_1d(p, k, seg), membership_1d(p, k - 1, back)
        checks["translation"].update(np.abs(a - b), seg, [a, b])
        a, b = membership_1d(p, k + 1, seg), membership_1d(p, k, back)
        checks["translation"].update(np.abs(a - b), seg, [a, b])

    return ConditionReport("1d", tuple(c.result() for c in checks.values()))
