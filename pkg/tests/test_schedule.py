import numpy as np
import pytest

import sepnoise as sn
from sepnoise.schedule import HamiltonianSchedule, RateSchedule, SampledCoeff


def test_constant_schedule():
    sched = HamiltonianSchedule(nbasis=3, terms=((0, 1.5), (2, -0.5)), t_op=2.0)
    assert sched.kind == "constant"
    assert sched.is_constant
    np.testing.assert_allclose(sched.coeff_vector(1.0), [1.5, 0.0, -0.5])


def test_expression_schedule():
    sched = HamiltonianSchedule(
        nbasis=3,
        terms=((0, sn.parse_expr("cos(t)")), (1, sn.parse_expr("sin(t)"))),
        t_op=2.0,
    )
    assert sched.kind == "expression"
    ts = np.linspace(0, 2, 9)
    coeffs = sched.sample_coeffs(ts)
    np.testing.assert_allclose(coeffs[:, 0], np.cos(ts))
    np.testing.assert_allclose(coeffs[:, 1], np.sin(ts))
    np.testing.assert_allclose(coeffs[:, 2], 0.0)


def test_sampled_schedule_interpolates():
    grid = np.linspace(0.0, 1.0, 5)
    values = grid**2
    sched = HamiltonianSchedule(
        nbasis=2, terms=((1, SampledCoeff(grid, values)),), t_op=1.0
    )
    assert sched.kind == "sampled"
    ts = np.array([0.1, 0.6])
    expected = np.interp(ts, grid, values)
    np.testing.assert_allclose(sched.sample_coeffs(ts)[:, 1], expected)


def test_schedule_validation():
    with pytest.raises(ValueError):
        HamiltonianSchedule(nbasis=3, terms=(), t_op=0.0)
    with pytest.raises(ValueError):
        HamiltonianSchedule(nbasis=3, terms=((5, 1.0),), t_op=1.0)
    with pytest.raises(ValueError):
        SampledCoeff(np.array([0.0, 0.0]), np.array([1.0, 2.0]))


def test_rate_schedule_constant():
    mat = np.diag([0.0, 0.0, 0.5]).astype(complex)
    sched = RateSchedule.constant(mat)
    assert sched.is_constant
    np.testing.assert_allclose(sched.value(0.3), mat)
    np.testing.assert_allclose(sched.scaled(2.0).value(0.0), 2 * mat)


def test_rate_schedule_time_dependent():
    y = np.diag([0.0, 1.0, 0.0]).astype(complex)
    z = np.diag([0.0, 0.0, 1.0]).astype(complex)
    sched = RateSchedule(
        terms=(
            (sn.parse_expr("sin(t)^2"), y),
            (sn.parse_expr("cos(t)^2"), z),
        )
    )
    assert not sched.is_constant
    out = sched.value(0.7)
    np.testing.assert_allclose(out[1, 1], np.sin(0.7) ** 2)
    np.testing.assert_allclose(out[2, 2], np.cos(0.7) ** 2)
    stack = sched.sample(np.linspace(0, 1, 7))
    assert stack.shape == (7, 3, 3)


def test_rate_schedule_rejects_non_hermitian():
    bad = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    with pytest.raises(ValueError):
        RateSchedule.constant(bad)
    with pytest.raises(ValueError):
        RateSchedule(terms=())
