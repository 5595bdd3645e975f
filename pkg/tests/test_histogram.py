import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ruspini.errors import DimensionMismatch, EmptyHistogram, OutOfUniverse
from ruspini.histogram import (
    CompensatedSum,
    Dataset,
    accumulate_crisp,
    accumulate_fuzzy,
    accumulate_fuzzy_chunked,
    compare_shifts,
    density_estimate,
    evaluation_grid,
    shift_sensitivity,
)
from ruspini.partition1d import Axis, get_mf, mf_cosine, mf_triangular
from ruspini.tensor import build_tensor


def _grid(d=2, count=6, spacing=1.0, mf=mf_triangular):
    axes = [Axis(0.0, spacing, count) for _ in range(d)]
    return axes, build_tensor(axes, [mf()] * d)


def test_dataset_validation():
    assert Dataset(np.zeros(4)).dim == 1
    with pytest.raises(ValueError):
        Dataset(np.array([[0.0, np.nan]]))
    with pytest.raises(DimensionMismatch):
        Dataset(np.zeros((3, 2)), columns=("a",))
    parts = Dataset(np.arange(10.0)).split(3)
    assert sum(p.n for p in parts) == 10


def test_point_on_node_gives_single_unit_accumulator():
    _, tp = _grid()
    h = accumulate_fuzzy(tp, np.array([[2.0, 3.0]]))
    assert h.nonzero() == [((3, 4), 1.0)]


def test_dropped_points_are_counted_not_accumulated():
    _, tp = _grid()
    h = accumulate_fuzzy(tp, np.array([[1.5, 1.5], [-1.0, 0.0], [9.0, 9.0]]))
    assert h.n_points == 3 and h.dropped == 2 and h.n_retained == 1
    assert h.total_mass() == 1.0


def test_empty_data():
    axes, tp = _grid()
    h = accumulate_fuzzy(tp, np.zeros((0, 2)))
    assert h.total_mass() == 0.0 and h.nonzero() == []
    with pytest.raises(EmptyHistogram):
        density_estimate(h, [1.0, 1.0])
    with pytest.raises(EmptyHistogram):
        density_estimate(accumulate_crisp(axes, np.zeros((0, 2))), [1.0, 1.0])


def test_width_mismatch():
    _, tp = _grid()
    with pytest.raises(DimensionMismatch):
        accumulate_fuzzy(tp, np.zeros((3, 3)))


@settings(deadline=None, max_examples=40)
@given(
    seed=st.integers(0, 2**32 - 1),
    n=st.integers(1, 400),
    d=st.integers(1, 3),
    mf=st.sampled_from(["triangular", "cosine"]),
)
def test_mass_conservation(seed, n, d, mf):
    axes = [Axis(-1.0, 0.5, 7)] * d
    tp = build_tensor(axes, [get_mf(mf)] * d)
    pts = np.random.default_rng(seed).uniform(-1.0, 2.0, (n, d))
    h = accumulate_fuzzy(tp, pts)
    assert abs(h.total_mass() - n) <= 1e-9 * n


@settings(deadline=None, max_examples=20)
@given(seed=st.integers(0, 2**32 - 1), chunks=st.integers(1, 9))
def test_chunked_merge_within_one_ulp(seed, chunks):
    _, tp = _grid(count=5, spacing=0.25, mf=mf_cosine)
    pts = np.random.default_rng(seed).uniform(0.0, 1.0, (3000, 2))
    one = accumulate_fuzzy(tp, pts)
    many = accumulate_fuzzy_chunked(tp, pts, chunks=chunks, workers=3)
    assert one.accumulators.keys() == many.accumulators.keys()
    for k, v in one.accumulators.items():
        assert abs(many.accumulators[k] - v) <= math.ulp(v)


@given(st.lists(st.lists(st.floats(-1e6, 1e6), max_size=30), min_size=1, max_size=6))
def test_compensated_merge_is_fsum(groups):
    total = CompensatedSum()
    for g in groups:
        total = total.merge(CompensatedSum.of(g))
    exact = math.fsum(v for g in groups for v in g)
    assert abs(total.value - exact) <= math.ulp(exact)


def test_crisp_counts():
    axes, _ = _grid(d=1, count=4)
    h = accumulate_crisp(axes, np.array([0.0, 0.5, 1.0, 2.999, 3.0, 3.5]))
    np.testing.assert_array_equal(h.counts, [2, 1, 2])
    assert h.dropped == 1 and h.count((3,)) == 2


def _integrate(h, axes, cells=400):
    where = evaluation_grid(axes, 0.0, cells)
    vol = np.prod([(a.upper - a.lower) for a in axes])
    return float(np.mean(density_estimate(h, where)) * vol)


@pytest.mark.parametrize("mf", [mf_triangular, mf_cosine])
def test_fuzzy_density_integrates_to_one(mf):
    # data kept at least one spacing away from the edges: no set is truncated
    axes, tp = _grid(d=1, count=12, spacing=0.5, mf=mf)
    pts = np.random.default_rng(5).normal(2.75, 0.6, 4000)
    pts = pts[(pts > 0.6) & (pts < 4.9)]
    assert _integrate(accumulate_fuzzy(tp, pts), axes, 20000) == pytest.approx(1.0, abs=2e-3)


def test_crisp_density_integrates_to_one():
    axes, _ = _grid(d=2, count=5)
    pts = np.random.default_rng(2).uniform(0, 4, (2000, 2))
    assert _integrate(accumulate_crisp(axes, pts), axes, 200) == pytest.approx(1.0, abs=1e-9)


def test_density_outside_universe():
    axes, tp = _grid()
    h = accumulate_fuzzy(tp, np.array([[1.0, 1.0]]))
    with pytest.raises(OutOfUniverse):
        density_estimate(h, [6.0, 0.0])


def test_shift_zero_and_empty_list():
    axes = [Axis(-3.0, 0.5, 13)]
    pts = np.random.default_rng(0).normal(0, 1, 500)
    assert shift_sensitivity("fuzzy", pts, axes, shifts=[]) == []
    rows = compare_shifts(pts, axes, shifts=[0.0, 0.3])
    assert rows[0] == (0.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        shift_sensitivity("crisp", pts, axes, shifts=[1.0])


def test_crisp_adversarial_half_shift_is_near_maximal():
    # clusters on nodes two bins apart: a half-bin shift moves every point
    # to the neighbouring crisp bin, fuzzy masses only spread
    axes = [Axis(0.0, 1.0, 21)]
    pts = np.repeat(np.arange(2.0, 19.0, 2.0), 50)
    (_, crisp), = shift_sensitivity("crisp", pts, axes, shifts=[0.5])
    (_, fuzzy), = shift_sensitivity("fuzzy", pts, axes, shifts=[0.5])
    where = evaluation_grid(axes, 0.5)
    span = where[-1, 0] - where[0, 0]
    # a half-bin shift keeps half of every old bin inside the new one, so the
    # integrated crisp discrepancy is at most 1; these data reach it
    assert crisp * span == pytest.approx(1.0, abs=0.06)
    assert fuzzy < crisp
