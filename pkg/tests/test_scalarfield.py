import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psitwist.scalarfield import Coord, ParseError, coords, cos, parse, sin


def exprs(n=4, depth=3):
    leaves = st.one_of(
        st.integers(1, n).map(Coord),
        st.integers(-3, 3).map(lambda k: parse(str(k)) if k >= 0 else -parse(str(-k))),
    )

    def extend(children):
        return st.one_of(
            st.tuples(children, children).map(lambda t: t[0] + t[1]),
            st.tuples(children, children).map(lambda t: t[0] * t[1]),
            st.tuples(children, children).map(lambda t: t[0] - t[1]),
            st.tuples(children, st.integers(0, 3)).map(lambda t: t[0] ** t[1]),
            children.map(sin),
            children.map(cos),
            children.map(lambda c: -c),
        )

    return st.recursive(leaves, extend, max_leaves=8)


def test_precedence():
    x = np.array([2.0, 3.0, 5.0])
    assert parse("x1 + x2*x3")(x) == 17
    assert parse("-x1^2")(x) == -4
    assert parse("(x1 + x2)^2")(x) == 25
    assert parse("x1^-1")(x) == 0.5
    assert parse("2*x3 - x2 - x1")(x) == 5


def test_derivatives_of_corpus():
    f = parse("x2*x3 - x4^2 + 2*x5")
    assert str(f.diff(4)) in ("-(2*x4)", "-2*x4")
    p = np.array([0.1, 0.2, 0.3, 0.4, 0.5])
    assert f.gradient(p) == pytest.approx([0, 0.3, 0.2, -0.8, 2])
    H = f.hessian(p)
    assert H[1, 2] == H[2, 1] == 1
    assert H[3, 3] == -2


def test_vectorised_evaluation():
    f = parse("x1*x2 + sin(x3)")
    x = np.random.default_rng(0).standard_normal((7, 3))
    assert f(x).shape == (7,)
    assert f.gradient(x).shape == (7, 3)
    assert f.hessian(x).shape == (7, 3, 3)
    assert np.allclose(f(x), x[:, 0] * x[:, 1] + np.sin(x[:, 2]))


def test_coords_helper():
    x1, x2 = coords(2)
    assert (x1 * x2) == parse("x1*x2")


@pytest.mark.parametrize(
    "text, position, expected",
    [
        ("x1*", 3, "NUMBER"),
        ("(x1", 3, "')'"),
        ("x1^1.5", 3, "INT"),
        ("x0", 0, "x1"),
        ("", 0, "x<INT>"),
        ("x1 x2", 3, "'*'"),
    ],
)
def test_parse_errors_report_position(text, position, expected):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.position == position
    assert expected in info.value.expected
    assert f"position {position}" in str(info.value)


def test_bad_character():
    with pytest.raises(ParseError) as info:
        parse("x1 $ x2")
    assert info.value.position == 3


def test_non_string():
    with pytest.raises(TypeError):
        parse(3)


@settings(max_examples=150, deadline=None)
@given(exprs())
def test_print_parse_round_trip(f):
    g = parse(str(f))
    x = np.random.default_rng(1).uniform(-1, 1, (5, 4))
    assert np.allclose(f(x), g(x), rtol=1e-12, atol=1e-12)


@settings(max_examples=150, deadline=None)
@given(exprs(), st.integers(1, 4), st.integers(0, 10_000))
def test_symbolic_derivative_matches_central_difference(f, i, seed):
    x = np.random.default_rng(seed).uniform(-1, 1, 4)
    h = 1e-5
    e = np.eye(4)[i - 1]
    fd = (f(x + h * e) - f(x - h * e)) / (2 * h)
    exact = f.diff(i)(x)
    scale = max(1.0, abs(f(x + h * e)), abs(f(x - h * e)), abs(exact))
    assert abs(fd - exact) <= 1e-6 * scale
