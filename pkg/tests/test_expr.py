import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sepnoise import expr
from sepnoise.expr import (
    BinOp,
    Call,
    Const,
    ExprNameError,
    ExprSyntaxError,
    Neg,
    Num,
    TimeVar,
    evaluate,
    parse_expr,
    to_string,
)


def val(text, t=0.0):
    return evaluate(parse_expr(text), t)


def test_examples():
    assert val("sin(sqrt(2)*t)^2", 0.0) == pytest.approx(0.0)
    assert val("cos(t)", 0.0) == pytest.approx(1.0)


def test_trig_identity_on_grid():
    ts = np.linspace(0.0, 7.0, 100)
    lhs = evaluate(parse_expr("0.5*(1-cos(2*t))"), ts)
    rhs = evaluate(parse_expr("sin(t)^2"), ts)
    assert np.abs(lhs - rhs).max() < 1e-12


@pytest.mark.parametrize(
    "text,expected",
    [
        ("2+3*4", 14.0),
        ("2*3^2", 18.0),
        ("-2^2", 4.0),          # unary minus binds tighter than ^
        ("2^-3", 0.125),
        ("2^3^2", 512.0),       # right-associative
        ("6/3/2", 1.0),
        ("1-2-3", -4.0),
        ("pow(2,5)", 32.0),
        ("2*-3", -6.0),
        ("(1+2)*(3+4)", 21.0),
        ("exp(0)", 1.0),
        ("sqrt(pow(3,2)+pow(4,2))", 5.0),
    ],
)
def test_precedence_regressions(text, expected):
    assert val(text) == pytest.approx(expected)


def test_pi():
    assert val("pi") == pytest.approx(np.pi)
    assert val("cos(pi)") == pytest.approx(-1.0)


def test_time_variable_vectorized():
    ts = np.linspace(0, 1, 11)
    out = evaluate(parse_expr("2*t + 1"), ts)
    assert np.abs(out - (2 * ts + 1)).max() < 1e-15


@pytest.mark.parametrize(
    "text,position",
    [
        ("2+", 2),
        ("(2", 2),
        ("1 + * 3", 4),
        ("sin(1,2)", 0),
        ("2 2", 2),
    ],
)
def test_syntax_error_positions(text, position):
    with pytest.raises(ExprSyntaxError) as err:
        parse_expr(text)
    assert err.value.position == position


def test_name_error_position():
    with pytest.raises(ExprNameError) as err:
        parse_expr("1 + bar")
    assert err.value.position == 4


def test_unexpected_character():
    with pytest.raises(ExprSyntaxError) as err:
        parse_expr("2 @ 3")
    assert err.value.position == 2


def test_print_parse_idempotent_samples():
    samples = [
        "sin(sqrt(2)*t)^2",
        "0.5*(1-cos(2*t))",
        "-t^2 + 3*t - 1/(t+2)",
        "pow(t, 2) / pi",
        "--t",
        "2^-t",
    ]
    for text in samples:
        ast = parse_expr(text)
        assert parse_expr(to_string(ast)) == ast


_leaf = st.one_of(
    st.builds(Num, st.floats(min_value=0.0, max_value=1e6,
                             allow_nan=False, allow_infinity=False)),
    st.just(TimeVar()),
    st.just(Const("pi")),
)


def _node_strategy(children):
    return st.one_of(
        st.builds(Neg, children),
        st.builds(BinOp, st.sampled_from("+-*/^"), children, children),
        st.builds(
            Call,
            st.sampled_from(["sin", "cos", "exp", "sqrt"]),
            st.tuples(children),
        ),
        st.builds(Call, st.just("pow"), st.tuples(children, children)),
    )


_ast = st.recursive(_leaf, _node_strategy, max_leaves=25)


@given(_ast)
@settings(max_examples=200, deadline=None)
def test_print_parse_roundtrip(ast):
    assert parse_expr(to_string(ast)) == ast


def test_evaluation_matches_numpy(rng):
    ts = rng.uniform(0.1, 5.0, size=32)
    out = evaluate(parse_expr("exp(-t)*cos(3*t) + sqrt(t)"), ts)
    ref = np.exp(-ts) * np.cos(3 * ts) + np.sqrt(ts)
    assert np.abs(out - ref).max() < 1e-14
