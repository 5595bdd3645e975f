import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ruspini.errors import IndexOutOfRange, InvalidAxis, InvalidMF
from ruspini.partition1d import (
    Axis,
    NormalizedMF,
    Partition1D,
    check_definition1,
    get_mf,
    membership_1d,
    mf_cosine,
    mf_triangular,
    mf_violations,
    normalize,
    register_mf,
    registry_names,
    validate_mf,
)

unit = st.floats(0.0, 1.0, allow_nan=False)


def test_builtin_values():
    tri, cos = mf_triangular(), mf_cosine()
    assert tri(0.0) == 1.0
    assert tri(0.25) == 0.75
    assert tri(1.0) == 0.0 and tri(-3.0) == 0.0
    assert cos(0.0) == 1.0
    assert cos(0.5) == pytest.approx(0.5, abs=1e-15)
    assert cos(1.0) == 0.0 and cos(1.5) == 0.0


def test_scalar_in_scalar_out():
    tri = mf_triangular()
    assert isinstance(tri(0.3), float)
    out = tri(np.array([0.0, 0.5]))
    assert isinstance(out, np.ndarray) and out.shape == (2,)


@pytest.mark.parametrize("name", ["triangular", "cosine"])
@given(u=unit)
def test_complement_law_builtins(name, u):
    eta = get_mf(name)
    assert abs(eta(u) + eta(1.0 - u) - 1.0) <= 1e-15


@pytest.mark.parametrize("name", ["triangular", "cosine"])
@given(x=st.floats(-4, 4, allow_nan=False))
def test_builtins_symmetric_and_bounded(name, x):
    eta = get_mf(name)
    assert eta(x) == eta(-x)
    assert 0.0 <= eta(x) <= 1.0


def test_registry_contains_builtins():
    assert {"triangular", "cosine"} <= set(registry_names())
    with pytest.raises(KeyError):
        get_mf("gaussian")


def test_register_validates():
    smooth = NormalizedMF(lambda x: np.where(np.abs(x) < 1, 1 - 3 * np.abs(x) ** 2 + 2 * np.abs(x) ** 3, 0.0), "smoothstep")
    register_mf("smoothstep", smooth)
    assert "smoothstep" in registry_names()
    bad = NormalizedMF(lambda x: np.maximum(0.0, 1 - np.asarray(x) ** 2), "parabola")
    with pytest.raises(InvalidMF):
        register_mf("parabola", bad)
    assert "parabola" not in registry_names()


def test_normalize_spacing_two():
    mu = lambda x: max(0.0, 1.0 - abs(x) / 2.0)
    eta = normalize(mu, 2.0)
    xs = np.linspace(-2, 2, 1001)
    np.testing.assert_array_equal(eta(xs), mf_triangular()(xs))


def test_normalize_rejects_bad_spacing():
    with pytest.raises(InvalidAxis):
        normalize(lambda x: 0.0, 0.0)


@pytest.mark.parametrize(
    "func, label",
    [
        (lambda x: 0.9 * np.maximum(0.0, 1 - np.abs(x)), "core"),
        (lambda x: np.maximum(0.0, 1 - np.abs(x) / 2), "support"),
        (lambda x: np.maximum(0.0, 1 - 2 * np.abs(x)), "support"),
        (lambda x: np.where(np.abs(x) < 1, 1 - x * x, 0.0), "complement"),
        (lambda x: np.where(np.abs(x) < 0.5, 1.0, np.where(np.abs(x) == 0.5, 0.5, 0.0)), "continuity"),
        (lambda x: np.where((x > -1) & (x < 1), np.where(x >= 0, 1 - x, (1 + x) ** 3), 0.0), "symmetry"),
        (lambda x: np.where(np.abs(x) < 1, 1 - np.abs(x), 0.0) / (np.abs(x) - 2) * -2 + np.nan * (np.abs(x) > 2.5), "evaluation"),
    ],
)
def test_validate_labels(func, label):
    with pytest.raises(InvalidMF) as info:
        validate_mf(NormalizedMF(func, "bad"))
    assert info.value.label == label


def test_violation_witness_complement():
    parabola = NormalizedMF(lambda x: np.where(np.abs(x) < 1, 1 - x * x, 0.0), "p")
    (label, witness, dev), *_ = [v for v in mf_violations(parabola) if v[0] == "complement"]
    assert witness == 0.5 and dev == pytest.approx(0.5)


def test_axis_validation():
    with pytest.raises(InvalidAxis):
        Axis(0.0, 1.0, 2)
    with pytest.raises(InvalidAxis):
        Axis(0.0, -1.0, 4)
    with pytest.raises(InvalidAxis):
        Axis(math.nan, 1.0, 4)
    a = Axis(1.0, 0.5, 5)
    np.testing.assert_array_equal(a.nodes, [1.0, 1.5, 2.0, 2.5, 3.0])
    assert a.node(1) == 1.0 and a.upper == 3.0
    with pytest.raises(IndexOutOfRange):
        a.node(6)


def test_membership_1d_zero_outside_universe():
    p = Partition1D.from_axis(Axis(0.0, 1.0, 4), mf_triangular())
    assert membership_1d(p, 1, -0.5) == 0.0
    assert membership_1d(p, 4, 3.5) == 0.0
    assert membership_1d(p, 2, 1.25) == 0.75
    with pytest.raises(IndexOutOfRange):
        membership_1d(p, 5, 1.0)


@given(x=st.floats(0.0, 4.0, allow_nan=False), name=st.sampled_from(["triangular", "cosine"]))
def test_membership_1d_sums_to_one(x, name):
    p = Partition1D.from_axis(Axis(0.0, 0.5, 9), get_mf(name))
    total = sum(membership_1d(p, k, x) for k in range(1, 10))
    assert abs(total - 1.0) <= 1e-12


@pytest.mark.parametrize("name", ["triangular", "cosine"])
def test_definition1_passes_uniform(name):
    report = check_definition1(Partition1D.from_axis(Axis(-1.0, 0.25, 9), get_mf(name)))
    assert len(report) == 9
    assert report.passed, report.to_text()


def test_definition1_flags_irregular_nodes():
    report = check_definition1(Partition1D(np.array([0.0, 1.0, 3.0]), mf_triangular()))
    assert report.failures() == [7, 8, 9]
    assert report["uniform_spacing"].witness is not None


def test_definition1_flags_bad_shape():
    parabola = NormalizedMF(lambda x: np.where(np.abs(x) < 1, 1 - np.asarray(x) ** 2, 0.0), "parabola")
    report = check_definition1(Partition1D.from_axis(Axis(0.0, 1.0, 4), parabola))
    assert 6 in report.failures()
    assert report["sum_to_one"].values[0] == pytest.approx(1.5)


@settings(max_examples=25, deadline=None)
@given(origin=st.floats(-100, 100), spacing=st.floats(0.01, 50), count=st.integers(3, 12))
def test_definition1_any_uniform_axis(origin, spacing, count):
    report = check_definition1(Partition1D.from_axis(Axis(origin, spacing, count), mf_triangular()), samples_per_bin=9)
    assert report.passed, report.to_text()
