"""``ruspini`` command-line interface.

Subcommands: ``eval``, ``verify``, ``grid``, ``hist``, ``compare``.
Exit status: 0 on success, 1 when ``verify`` finds a failing condition,
2 on configuration, input or membership-function errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .config import PANELS, VARIANTS, RunConfig, apply_overrides, load_config, parse_shifts
from .errors import ConfigError, DimensionMismatch, RuspiniError, UnsupportedDimension
from .histogram import accumulate_crisp, accumulate_fuzzy, compare_shifts
from .io import GridExport, crisp_histogram_text, fmt, fuzzy_histogram_text, read_dataset, shift_table_text
from .tensor import Bin
from .verifier import verify_partition

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2
DEFAULT_RESOLUTION = 101


def _add_partition_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("partition")
    g.add_argument("--config", help="run configuration file (flags override its values)")
    g.add_argument("--dim", type=int, help="number of axes")
    g.add_argument("--origin", type=float, action="append", default=[], help="first node (repeat per axis)")
    g.add_argument("--spacing", type=float, action="append", default=[], help="node spacing c_j (repeat per axis)")
    g.add_argument("--count", type=int, action="append", default=[], help="nodes per axis (repeat per axis)")
    g.add_argument("--mf", action="append", default=[], help="registry name or expression in x (repeat per axis)")
    g.add_argument("--variant", choices=VARIANTS, help="use the non-tensor two-dimensional variant")
    g.add_argument("--tolerance", type=float)
    g.add_argument("--seed", type=int)
    g.add_argument("--out", help="output file (default: standard output)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ruspini", description="Strong-uniform fuzzy partitions and fuzzy histograms.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="print the centralized membership and the bin-corner memberships at a point")
    _add_partition_flags(p)
    p.add_argument("point", nargs="+", help="offset from the first node, e.g. '0.5,0.5' or '0.5 0.5'")

    p = sub.add_parser("verify", help="check every partition condition and write a report")
    _add_partition_flags(p)
    p.add_argument("--samples-per-axis", type=int, dest="samples_per_axis")
    p.add_argument("--random-points", type=int, dest="random_points")

    p = sub.add_parser("grid", help="export a panel surface (d = 2)")
    _add_partition_flags(p)
    p.add_argument("--resolution", type=int, help=f"samples per axis (default {DEFAULT_RESOLUTION})")
    p.add_argument("--panel", choices=PANELS, help="A: centralized membership; B: corner sum over one bin")

    p = sub.add_parser("hist", help="accumulate a fuzzy histogram from a CSV file")
    _add_partition_flags(p)
    p.add_argument("data", help="CSV file, one point per row")
    p.add_argument("--skip-bad", action="store_true", default=None, dest="skip_bad", help="skip malformed rows")
    p.add_argument("--crisp-out", help="also write the crisp histogram here")

    p = sub.add_parser("compare", help="crisp vs fuzzy sensitivity to partition shifts")
    _add_partition_flags(p)
    p.add_argument("data", help="CSV file, one point per row")
    p.add_argument("--shift", action="append", default=[], help="shift fraction(s) of a spacing, e.g. 0.25 or 0,0.5")
    p.add_argument("--resolution", type=int, help="evaluation-grid cells per axis")
    p.add_argument("--skip-bad", action="store_true", default=None, dest="skip_bad")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    base = load_config(args.config) if args.config else None
    shifts = ()
    for text in getattr(args, "shift", []):
        shifts += parse_shifts(text)
    return apply_overrides(
        base,
        dim=args.dim,
        origin=args.origin,
        spacing=args.spacing,
        count=args.count,
        mf=args.mf,
        variant=args.variant,
        tolerance=args.tolerance,
        seed=args.seed,
        samples_per_axis=getattr(args, "samples_per_axis", None),
        random_points=getattr(args, "random_points", None),
        resolution=getattr(args, "resolution", None),
        panel=getattr(args, "panel", None),
        shifts=shifts,
        skip_bad=getattr(args, "skip_bad", None),
        out=args.out,
    )


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _point(parts: list[str], d: int) -> np.ndarray:
    values = []
    for part in parts:
        for item in part.split(","):
            if item.strip():
                try:
                    values.append(float(item))
                except ValueError:
                    raise ConfigError(f"not a number in point: {item!r}") from None
    if len(values) != d:
        raise DimensionMismatch(f"point has {len(values)} coordinates, partition has dim = {d}")
    return np.array(values)


def cmd_eval(cfg: RunConfig, point_parts: list[str]) -> int:
    tp = cfg.partition()
    offset = _point(point_parts, tp.dim)
    lines = [f"mu = {fmt(tp.centralized_mu(offset))}"]
    x = tp.lower + offset
    if tp.in_universe(x[None, :])[0]:
        ids, vals = tp.corner_memberships(x[None, :])
        for set_id, v in zip(ids[0], vals[0]):
            lines.append(f"corner {','.join(str(int(i)) for i in set_id)} = {fmt(v)}")
        lines.append(f"corner_sum = {fmt(float(np.sum(vals[0])))}")
    else:
        lines.append("corner_sum = outside universe")
    _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    report = verify_partition(cfg.partition(), cfg.verify_config())
    header = f"# partition={cfg.describe()}\n"
    _emit(header + report.to_text(), cfg.out)
    return EXIT_OK if report.passed else EXIT_FAIL


def grid_export(cfg: RunConfig) -> GridExport:
    """Panel A: centralized membership over ``[-c, c]^2``; panel B: corner sum over the first bin."""
    if cfg.dim != 2:
        raise UnsupportedDimension(f"panel exports need dim = 2, got {cfg.dim}")
    tp = cfg.partition()
    res = cfg.resolution or DEFAULT_RESOLUTION
    c = tp.spacings
    if cfg.panel == "A":
        ticks = [np.linspace(-c[j], c[j], res) for j in range(2)]
    else:
        ticks = [np.linspace(tp.lower[j], tp.lower[j] + c[j], res) for j in range(2)]
    g0, g1 = np.meshgrid(*ticks, indexing="ij")
    pts = np.stack([g0.ravel(), g1.ravel()], axis=1)
    if cfg.panel == "A":
        values = tp.centralized_mu(pts)
        what = "centralized membership"
    else:
        values = tp.bin_corner_sum(Bin((1, 1)), pts)
        what = "sum of the four corner memberships over bin (1,1)"
    meta = {"partition": cfg.describe(), "panel": cfg.panel, "plotted": what, "resolution": res}
    for j, a in enumerate(cfg.axes, start=1):
        meta[f"axis{j}"] = f"origin={fmt(a.origin)};spacing={fmt(a.spacing)};count={a.count}"
    return GridExport(ticks, np.asarray(values).reshape(res, res), meta)


def cmd_grid(cfg: RunConfig) -> int:
    _emit(grid_export(cfg).to_text(), cfg.out)
    return EXIT_OK


def _load(cfg: RunConfig, path: str):
    data, skipped = read_dataset(path, skip_bad=cfg.skip_bad)
    if data.n and data.dim != cfg.dim:
        raise DimensionMismatch(f"CSV has {data.dim} columns, partition has dim = {cfg.dim}")
    return data, skipped


def cmd_hist(cfg: RunConfig, path: str, crisp_out: str | None = None) -> int:
    data, skipped = _load(cfg, path)
    summary = sys.stderr if cfg.out is None else sys.stdout
    if data.n == 0:
        print(f"EmptyHistogram: no data points in {path}", file=summary)
        print(f"n = 0\nskipped = {skipped}\ndropped = 0\ntotal_mass = 0", file=summary)
        return EXIT_OK
    h = accumulate_fuzzy(cfg.partition(), data)
    meta = {"partition": cfg.describe()}
    _emit(fuzzy_histogram_text(h, meta), cfg.out)
    if crisp_out:
        Path(crisp_out).write_text(crisp_histogram_text(accumulate_crisp(cfg.axis_objects(), data), meta), encoding="utf-8")
    print(f"n = {h.n_points}\nskipped = {skipped}\ndropped = {h.dropped}\ntotal_mass = {fmt(h.total_mass())}", file=summary)
    return EXIT_OK


def cmd_compare(cfg: RunConfig, path: str) -> int:
    data, skipped = _load(cfg, path)
    if data.n == 0 and cfg.shifts:
        print(f"EmptyHistogram: no data points in {path}", file=sys.stderr)
        _emit(shift_table_text([]), cfg.out)
        return EXIT_OK
    template = cfg.partition()
    rows = compare_shifts(data, cfg.axis_objects(), template, cfg.shifts, cfg.resolution)
    _emit(shift_table_text(rows), cfg.out)
    if skipped:
        print(f"skipped = {skipped}", file=sys.stderr)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        if args.command == "eval":
            return cmd_eval(cfg, args.point)
        if args.command == "verify":
            return cmd_verify(cfg)
        if args.command == "grid":
            return cmd_grid(cfg)
        if args.command == "hist":
            return cmd_hist(cfg, args.data, args.crisp_out)
        return cmd_compare(cfg, args.data)
    except (RuspiniError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
