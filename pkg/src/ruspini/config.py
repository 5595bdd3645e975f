"""Run configuration: a flat ``key = value`` file with repeated ``[axis]`` sections.

Example::

    # two-dimensional hybrid partition
    tolerance = 1e-09
    seed = 42

    [axis]
    origin = 0.0
    spacing = 1.0
    count = 5
    mf = triangular

    [axis]
    mf = cosine

Keys before the first ``[axis]`` are global; keys omitted from an axis section
take their defaults.  :meth:`RunConfig.canonical` writes every key explicitly
and re-parses to an equal configuration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

from .dsl import canonical_spec, mf_from_spec
from .errors import ConfigError
from .partition1d import Axis, NormalizedMF
from .tensor import GridPartition, build_tensor
from .variants import variant_partition
from .verifier import VerifyConfig

VARIANTS = ("eq12",)
PANELS = ("A", "B")


@dataclass(frozen=True)
class AxisSpec:
    origin: float = 0.0
    spacing: float = 1.0
    count: int = 3
    mf: str = "triangular"

    def axis(self) -> Axis:
        return Axis(self.origin, self.spacing, self.count)


@dataclass(frozen=True)
class RunConfig:
    axes: tuple[AxisSpec, ...] = (AxisSpec(),)
    variant: str | None = None
    tolerance: float = 1e-9
    seed: int = 42
    samples_per_axis: int = 33
    random_points: int = 1000
    resolution: int | None = None
    panel: str = "A"
    shifts: tuple[float, ...] = ()
    skip_bad: bool = False
    out: str | None = None
    _mfs: tuple = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        if not self.axes:
            raise ConfigError("at least one axis is required")
        if self.variant is not None and self.variant not in VARIANTS:
            raise ConfigError(f"unknown variant {self.variant!r}; known: {', '.join(VARIANTS)}")
        if self.variant is not None and len(self.axes) != 2:
            raise ConfigError(f"variant {self.variant} is two-dimensional, got dim={len(self.axes)}")
        if self.panel not in PANELS:
            raise ConfigError(f"panel must be A or B, got {self.panel!r}")
        if not (self.tolerance > 0 and math.isfinite(self.tolerance)):
            raise ConfigError("tolerance must be positive and finite")
        if self.resolution is not None and self.resolution < 2:
            raise ConfigError("resolution must be at least 2")
        for s in self.shifts:
            if not 0.0 <= s < 1.0:
                raise ConfigError(f"shift fractions must lie in [0, 1), got {s!r}")
        try:
            for a in self.axes:
                a.axis()
            self.verify_config()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        # InvalidMF and DSL errors propagate with their own labels and offsets
        mfs = tuple(mf_from_spec(a.mf, self.tolerance) for a in self.axes)
        object.__setattr__(self, "_mfs", mfs)
        object.__setattr__(self, "axes", tuple(replace(a, mf=canonical_spec(a.mf)) for a in self.axes))

    @property
    def dim(self) -> int:
        return len(self.axes)

    @property
    def mfs(self) -> tuple[NormalizedMF, ...]:
        return self._mfs

    def axis_objects(self) -> list[Axis]:
        return [a.axis() for a in self.axes]

    def partition(self) -> GridPartition:
        if self.variant == "eq12":
            return variant_partition(self.axis_objects())
        return build_tensor(self.axis_objects(), self.mfs, self.tolerance)

    def verify_config(self) -> VerifyConfig:
        return VerifyConfig(
            samples_per_axis=self.samples_per_axis,
            random_points=self.random_points,
            tolerance=self.tolerance,
            seed=self.seed,
        )

    def describe(self) -> str:
        """Short partition label used in export metadata."""
        if self.variant:
            return f"variant {self.variant}"
        return " x ".join(a.mf for a in self.axes)

    def canonical(self) -> str:
        lines = [
            f"dim = {self.dim}",
            f"variant = {self.variant or ''}",
            f"tolerance = {self.tolerance!r}",
            f"seed = {self.seed}",
            f"samples_per_axis = {self.samples_per_axis}",
            f"random_points = {self.random_points}",
            f"resolution = {'' if self.resolution is None else self.resolution}",
            f"panel = {self.panel}",
            "shift = " + ", ".join(repr(s) for s in self.shifts),
            f"skip_bad = {'true' if self.skip_bad else 'false'}",
            f"out = {self.out or ''}",
        ]
        for a in self.axes:
            lines += [
                "",
                "[axis]",
                f"origin = {a.origin!r}",
                f"spacing = {a.spacing!r}",
                f"count = {a.count}",
                f"mf = {a.mf}",
            ]
        return "\n".join(lines) + "\n"


_GLOBAL_KEYS = {
    "dim", "variant", "tolerance", "seed", "samples_per_axis", "random_points",
    "resolution", "panel", "shift", "skip_bad", "out",
}
_AXIS_KEYS = {"origin", "spacing", "count", "mf"}


def parse_config_text(text: str) -> tuple[dict, list[dict]]:
    """Split a config file into raw global values and per-axis raw values."""
    glob: dict[str, str] = {}
    axes: list[dict[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("["):
            if line != "[axis]":
                raise ConfigError(f"line {lineno}: unknown section {line!r}")
            axes.append({})
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        target, allowed = (axes[-1], _AXIS_KEYS) if axes else (glob, _GLOBAL_KEYS)
        if key not in allowed:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in target:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        target[key] = value
    return glob, axes


def _num(key: str, text: str, kind=float):
    try:
        value = kind(text)
    except ValueError:
        raise ConfigError(f"{key}: not a valid {kind.__name__}: {text!r}") from None
    if kind is float and not math.isfinite(value):
        raise ConfigError(f"{key}: must be finite")
    return value


def _bool(key: str, text: str) -> bool:
    low = text.lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise ConfigError(f"{key}: expected true or false, got {text!r}")


def parse_shifts(text: str) -> tuple[float, ...]:
    return tuple(_num("shift", s.strip()) for s in text.split(",") if s.strip())


def _axis_from_raw(raw: dict) -> AxisSpec:
    kw = {}
    if "origin" in raw:
        kw["origin"] = _num("origin", raw["origin"])
    if "spacing" in raw:
        kw["spacing"] = _num("spacing", raw["spacing"])
    if "count" in raw:
        kw["count"] = _num("count", raw["count"], int)
    if raw.get("mf"):
        kw["mf"] = raw["mf"]
    return AxisSpec(**kw)


def _global_kwargs(raw: dict) -> dict:
    kw: dict = {}
    if raw.get("variant"):
        kw["variant"] = raw["variant"]
    for key in ("tolerance",):
        if key in raw:
            kw[key] = _num(key, raw[key])
    for key in ("seed", "samples_per_axis", "random_points"):
        if key in raw:
            kw[key] = _num(key, raw[key], int)
    if raw.get("resolution"):
        kw["resolution"] = _num("resolution", raw["resolution"], int)
    if "panel" in raw:
        kw["panel"] = raw["panel"]
    if "shift" in raw:
        kw["shifts"] = parse_shifts(raw["shift"])
    if "skip_bad" in raw:
        kw["skip_bad"] = _bool("skip_bad", raw["skip_bad"])
    if raw.get("out"):
        kw["out"] = raw["out"]
    return kw


def _fit_axes(axes: list[AxisSpec], dim: int) -> list[AxisSpec]:
    if len(axes) == dim:
        return axes
    if not axes:
        return [AxisSpec()] * dim
    if len(axes) == 1:
        return axes * dim
    raise ConfigError(f"dim = {dim} but {len(axes)} axis sections given")


def config_from_text(text: str) -> RunConfig:
    glob, raw_axes = parse_config_text(text)
    axes = [_axis_from_raw(r) for r in raw_axes]
    kw = _global_kwargs(glob)
    dim = _num("dim", glob["dim"], int) if glob.get("dim") else (len(axes) or (2 if "variant" in kw else 1))
    if dim < 1:
        raise ConfigError("dim must be at least 1")
    return RunConfig(axes=tuple(_fit_axes(axes, dim)), **kw)


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return config_from_text(text)


def _broadcast(name: str, values: Sequence, dim: int) -> list:
    if len(values) == 1:
        return list(values) * dim
    if len(values) != dim:
        raise ConfigError(f"--{name} given {len(values)} times for dim = {dim}")
    return list(values)


def apply_overrides(
    base: RunConfig | None,
    *,
    dim: int | None = None,
    origin: Sequence[float] = (),
    spacing: Sequence[float] = (),
    count: Sequence[int] = (),
    mf: Sequence[str] = (),
    **scalars,
) -> RunConfig:
    """Layer command-line values over ``base`` (a loaded file, or defaults).

    Per-axis lists of length one broadcast to every axis.  ``None`` scalars
    mean "not given" and keep the base value.
    """
    variant = scalars.get("variant") or (base.variant if base else None)
    if dim is None:
        per_axis = max(len(origin), len(spacing), len(count), len(mf))
        dim = base.dim if base else (per_axis or (2 if variant else 1))
    if dim < 1:
        raise ConfigError("--dim must be at least 1")
    if variant and mf:
        raise ConfigError("--variant and --mf are mutually exclusive")
    axes = _fit_axes(list(base.axes) if base else [], dim)
    for name, values in (("origin", origin), ("spacing", spacing), ("count", count), ("mf", mf)):
        if values:
            vals = _broadcast(name, values, dim)
            axes = [replace(a, **{name: v}) for a, v in zip(axes, vals)]
    kw = {}
    for key in ("tolerance", "seed", "samples_per_axis", "random_points", "resolution", "panel", "shifts", "skip_bad", "out"):
        given = scalars.get(key)
        if given is not None and given != ():
            kw[key] = given
        elif base is not None:
            kw[key] = getattr(base, key)
    return RunConfig(axes=tuple(axes), variant=variant, **kw)
