import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dgsuper.smooth import Jet, SmoothFunction, cos, exp, log, polynomial, sin, sqrt

xs = st.floats(-3, 3, allow_nan=False)


def fd_derivative(f, x, eps=1e-5):
    return (f(x + eps) - f(x - eps)) / (2 * eps)


def test_exp_sin_derivative_closed_form():
    u = SmoothFunction(lambda x: exp(sin(x)))
    x = np.linspace(0, 2 * math.pi, 9)
    np.testing.assert_allclose(u.derivative(1).eval(x), np.cos(x) * np.exp(np.sin(x)), atol=1e-14)


@settings(max_examples=40, deadline=None)
@given(xs)
def test_exp_sin_jets_vs_finite_differences(x):
    u = SmoothFunction(lambda y: exp(sin(y)))
    jet = u.jet(np.array(x), 4)
    for n in range(4):
        fd = fd_derivative(lambda y: u.jet(np.array(y), n)[n], x)
        assert jet[n + 1] == pytest.approx(fd, abs=1e-7)


@pytest.mark.parametrize("expr, closed", [
    (lambda x: sin(x) * cos(x), lambda x: np.cos(2 * x)),
    (lambda x: 1.0 / (2.0 + sin(x)), lambda x: -np.cos(x) / (2 + np.sin(x)) ** 2),
    (lambda x: log(2.0 + x * x), lambda x: 2 * x / (2 + x * x)),
    (lambda x: sqrt(1.0 + x * x), lambda x: x / np.sqrt(1 + x * x)),
    (lambda x: (1.0 + x * x) ** 1.5, lambda x: 3 * x * np.sqrt(1 + x * x)),
    (lambda x: x**3 - 2.0 * x, lambda x: 3 * x**2 - 2),
])
def test_first_derivatives(expr, closed):
    u = SmoothFunction(expr)
    x = np.linspace(-1.5, 1.5, 13)
    np.testing.assert_allclose(u.jet(x, 1)[1], closed(x), rtol=1e-13, atol=1e-14)


@pytest.mark.parametrize("n", range(0, 8))
def test_high_order_sin(n):
    x = np.linspace(0, 3, 5)
    expected = np.sin(x + n * math.pi / 2)
    np.testing.assert_allclose(SmoothFunction(sin).jet(x, 7)[n], expected, atol=1e-13)


def test_polynomial_jets_are_exact():
    p = polynomial([1.0, -2.0, 0.5, 3.0])  # 1 - 2x + x^2/2 + 3x^3
    x = np.array([0.0, 1.0, -2.0])
    jet = p.jet(x, 5)
    np.testing.assert_allclose(jet[0], 1 - 2 * x + 0.5 * x**2 + 3 * x**3)
    np.testing.assert_allclose(jet[1], -2 + x + 9 * x**2)
    np.testing.assert_allclose(jet[3], 18.0)
    np.testing.assert_allclose(jet[4:], 0.0)


def test_constant_function():
    c = SmoothFunction(lambda x: 2.5)
    assert c.eval(1.0) == 2.5
    np.testing.assert_array_equal(c.jet(np.zeros(3), 2), [[2.5] * 3, [0] * 3, [0] * 3])


def test_shift_and_scale():
    u = SmoothFunction(sin)
    np.testing.assert_allclose(u.shifted(0.3).eval(1.0), math.sin(0.7))
    np.testing.assert_allclose((-u).eval(1.0), -math.sin(1.0))
    np.testing.assert_allclose((2 * u).derivative().eval(0.0), 2.0)


def test_max_order_is_enforced():
    u = SmoothFunction(jet_fn=lambda x, r: np.stack([np.sin(x + i * math.pi / 2) for i in range(r + 1)]),
                       max_order=2)
    u.jet(np.zeros(2), 2)
    with pytest.raises(ValueError):
        u.jet(np.zeros(2), 3)
    with pytest.raises(ValueError):
        u.derivative(3)


def test_requires_exactly_one_source():
    with pytest.raises(ValueError):
        SmoothFunction()
    with pytest.raises(ValueError):
        SmoothFunction(sin, jet_fn=lambda x, r: x)


def test_jet_rejects_numpy_ufuncs():
    with pytest.raises(TypeError):
        np.sin(Jet.variable(np.zeros(1), 2))


@settings(max_examples=40, deadline=None)
@given(xs, xs)
def test_product_rule(a, b):
    x = Jet.variable(np.array(a), 3)
    y = Jet.variable(np.array(b), 3)
    prod = (x * y).derivatives()
    assert prod[0] == pytest.approx(a * b)
    assert prod[1] == pytest.approx(a + b)
    assert prod[2] == pytest.approx(2.0)
