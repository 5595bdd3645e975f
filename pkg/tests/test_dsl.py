import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dsl_corpus import MALFORMED, UNKNOWN
from ruspini.dsl import BinOp, Call, Neg, Num, Pi, Var, canonical_spec, compile_mf, evaluate, mf_from_spec, parse_mf, pretty
from ruspini.errors import InvalidMF, MFSyntaxError, UnknownIdentifier
from ruspini.partition1d import mf_cosine, mf_triangular


def test_parse_tree():
    assert parse_mf("1 - abs(x)") == BinOp("-", Num(1.0), Call("abs", (Var(),)))
    assert parse_mf("-x*2") == BinOp("*", Neg(Var()), Num(2.0))
    assert parse_mf("1 - 2 - 3") == BinOp("-", BinOp("-", Num(1.0), Num(2.0)), Num(3.0))
    assert parse_mf("max(0, pi)") == Call("max", (Num(0.0), Pi()))
    assert parse_mf(" .5e1 ") == Num(5.0)


@pytest.mark.parametrize("text, x, expected", [
    ("1 - abs(x)", -0.25, 0.75),
    ("2 * 3 - 4 / 8", 0.0, 5.5),
    ("--x", 0.5, 0.5),
    ("min(x, 1 - x)", 0.25, 0.25),
    ("sqrt(4) + sin(0) + cos(0)", 0.0, 3.0),
    ("(cos(pi*x)+1)/2", 1.0, 0.0),
])
def test_evaluate(text, x, expected):
    assert evaluate(parse_mf(text), x) == pytest.approx(expected, abs=1e-15)


def test_evaluate_vectorized():
    out = evaluate(parse_mf("x * x"), np.array([1.0, 2.0, 3.0]))
    np.testing.assert_array_equal(out, [1.0, 4.0, 9.0])


@pytest.mark.parametrize("text, offset", MALFORMED)
def test_parse_error_offsets(text, offset):
    with pytest.raises(MFSyntaxError) as info:
        parse_mf(text)
    assert info.value.offset == offset
    assert info.value.expected


@pytest.mark.parametrize("text, name, offset", UNKNOWN)
def test_unknown_identifiers(text, name, offset):
    with pytest.raises(UnknownIdentifier) as info:
        parse_mf(text)
    assert (info.value.name, info.value.offset) == (name, offset)


def test_expected_sets():
    with pytest.raises(MFSyntaxError) as info:
        parse_mf("(1 - x")
    assert "')'" in info.value.expected and "end of input" not in info.value.expected
    with pytest.raises(MFSyntaxError) as info:
        parse_mf("x 1")
    assert "end of input" in info.value.expected


@pytest.mark.parametrize("text, builtin", [("1 - abs(x)", mf_triangular()), ("(cos(pi*x)+1)/2", mf_cosine())])
def test_compile_matches_builtins(text, builtin):
    mf = compile_mf(parse_mf(text))
    xs = np.linspace(-2, 2, 4001)
    assert np.max(np.abs(mf(xs) - builtin(xs))) <= 1e-15


@pytest.mark.parametrize("text, label", [
    ("0.9 - 0.9*abs(x)", "core"),
    ("max(0, 1 - 2*abs(x))", "support"),
    ("1 - x", "symmetry"),
    ("1 - abs(x) + 0.1*(sin(4*pi*abs(x)) - 2*sin(2*pi*abs(x)))", "monotonicity"),
    ("1 - x*x", "complement"),
    ("0.5 + 0.5*(0.5 - abs(x))/(abs(0.5 - abs(x)) + 1e-300)", "continuity"),
    ("1 - abs(x)/(x - 0.25)", "evaluation"),
])
def test_compile_rejections(text, label):
    with pytest.raises(InvalidMF) as info:
        compile_mf(parse_mf(text))
    assert info.value.label == label


def test_complement_witness():
    with pytest.raises(InvalidMF) as info:
        compile_mf(parse_mf("1 - x*x"))
    assert info.value.witness == 0.5


def test_spec_lookup():
    assert mf_from_spec("cosine") is mf_from_spec(" cosine ")
    assert canonical_spec("triangular") == "triangular"
    assert canonical_spec("(1-abs( x ))") == "1.0 - abs(x)"


# random expression trees for the round-trip properties
numbers = st.floats(0.0, 1e6, allow_nan=False, allow_infinity=False).map(Num)
leaves = st.one_of(numbers, st.just(Var()), st.just(Pi()))


def _extend(children):
    return st.one_of(
        children.map(Neg),
        st.builds(BinOp, st.sampled_from("+-*/"), children, children),
        st.builds(lambda f, a: Call(f, (a,)), st.sampled_from(["abs", "cos", "sin", "sqrt"]), children),
        st.builds(lambda f, a, b: Call(f, (a, b)), st.sampled_from(["min", "max"]), children, children),
    )


trees = st.recursive(leaves, _extend, max_leaves=12)


@settings(max_examples=300)
@given(trees)
def test_pretty_round_trip(tree):
    text = pretty(tree)
    assert parse_mf(text) == tree
    assert pretty(parse_mf(text)) == text


@given(trees, st.floats(-1, 1))
def test_pretty_preserves_value(tree, x):
    a = evaluate(tree, x)
    b = evaluate(parse_mf(pretty(tree)), x)
    assert a == b or (math.isnan(a) and math.isnan(b))
