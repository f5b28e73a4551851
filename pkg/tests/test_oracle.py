import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multistrat.errors import ArgumentError
from multistrat.funcs import FunctionTuple, Poly, constant_ones
from multistrat.oracle import (
    SimplexQuadSpec,
    brute_force_J,
    gaussian_power_moments,
    hermite_ito_closed_form,
    midpoint_strat,
    transport_variance,
)
from multistrat.paths import PiecewiseLinearPath, RngSeed, gen_brownian


def test_hermite_low_orders():
    w, t = 0.7, 0.9
    assert hermite_ito_closed_form(0, w, t) == 1.0
    assert hermite_ito_closed_form(1, w, t) == w
    assert hermite_ito_closed_form(2, w, t) == pytest.approx((w * w - t) / 2)
    assert hermite_ito_closed_form(3, w, t) == pytest.approx((w**3 - 3 * t * w) / 6)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 8), st.floats(-3, 3), st.floats(0.1, 2))
def test_hermite_derivative_identity(n, w, t):
    h = 1e-6
    fd = (hermite_ito_closed_form(n, w + h, t) - hermite_ito_closed_form(n, w - h, t)) / (2 * h)
    assert fd == pytest.approx(hermite_ito_closed_form(n - 1, w, t), rel=1e-5, abs=1e-5)


def test_brute_force_powers():
    # unit integrands: J_n(T) = W(T)^n / n! on any path
    p = PiecewiseLinearPath(np.array([0.0, 0.3, 0.7, 1.0]), np.array([0.0, 0.9, -0.3, 0.4]))
    for n in (1, 2, 3):
        got = brute_force_J(constant_ones(n), p, SimplexQuadSpec(n, 256))
        assert got == pytest.approx(0.4**n / math.factorial(n), abs=1e-4)


def test_brute_force_weighted_line():
    # W(t) = t, f1 = t, f2 = 1: int_0^1 int_0^s u du ds = 1/6
    p = PiecewiseLinearPath(np.array([0.0, 1.0]), np.array([0.0, 1.0]))
    tup = FunctionTuple((Poly((0.0, 1.0)), Poly((1.0,))), 1.0)
    assert brute_force_J(tup, p, SimplexQuadSpec(2, 400)) == pytest.approx(1 / 6, abs=1e-5)


def test_brute_force_limits():
    p = PiecewiseLinearPath(np.array([0.0, 1.0]), np.array([0.0, 1.0]))
    with pytest.raises(ArgumentError):
        SimplexQuadSpec(4, 10)
    with pytest.raises(ArgumentError):
        brute_force_J(constant_ones(2), p, SimplexQuadSpec(3, 10))


def test_midpoint_order_two_is_exact_square():
    w = gen_brownian(512, 1.0, RngSeed(8))
    got = midpoint_strat(constant_ones(2), w)
    assert np.allclose(got.values, w.values**2 / 2, atol=1e-13)


def test_transport_variance_limits():
    assert transport_variance(1e7, 1.0) == pytest.approx(1.0, abs=1e-6)
    # small m t: Var ~ m t^2
    assert transport_variance(1e-3, 0.5) == pytest.approx(1e-3 * 0.25, rel=1e-3)
    assert transport_variance(1.0, 1.0) == pytest.approx(1 - (1 - math.exp(-2)) / 2)


def test_transport_variance_by_quadrature():
    # m * int int exp(-2 m |u - v|) du dv over [0, t]^2
    m, t = 3.0, 0.8
    x = np.linspace(0, t, 1601)
    wts = np.full(x.size, x[1] - x[0])
    wts[[0, -1]] *= 0.5
    k = np.exp(-2 * m * np.abs(x[:, None] - x[None, :]))
    assert m * wts @ k @ wts == pytest.approx(transport_variance(m, t), rel=1e-5)


def test_gaussian_power_moments():
    assert gaussian_power_moments(1, 2.0) == (0.0, 2.0)
    mean, var = gaussian_power_moments(2, 1.0)
    assert (mean, var) == pytest.approx((0.5, 0.5))
    mean, var = gaussian_power_moments(3, 1.0)
    assert mean == 0.0 and var == pytest.approx(15 / 36)


def test_brute_force_examples():
    chord = PiecewiseLinearPath(np.array([0.0, 1.0]), np.array([0.0, 1.0]))
    assert brute_force_J(constant_ones(2), chord, SimplexQuadSpec(2, 64)) == pytest.approx(0.5, abs=1e-14)
    p = PiecewiseLinearPath(np.array([0.0, 0.37, 1.0]), np.array([0.0, -0.8, 0.25]))
    assert brute_force_J(constant_ones(1), p, SimplexQuadSpec(1, 10)) == pytest.approx(0.25, abs=1e-10)


def test_hermite_worked_value():
    assert hermite_ito_closed_form(3, 2.0, 1.0) == pytest.approx(1 / 3)


def test_transport_variance_at_unit_rate():
    assert transport_variance(1.0, 1.0) == pytest.approx(0.5676676, abs=1e-7)
    assert transport_variance(5.0, 0.0) == 0.0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_midpoint_agrees_with_gnsum(n):
    from multistrat.harness.suites import mixed_tuple
    from multistrat.harness.tolerance import tol
    from multistrat.strat import StratMethod, strat_integral

    w = gen_brownian(2**14, 1.0, RngSeed(42))
    a = midpoint_strat(mixed_tuple(n), w).values
    b = strat_integral(mixed_tuple(n), w, StratMethod.GNSUM).values
    assert np.max(np.abs(a - b)) <= tol(2**14)
