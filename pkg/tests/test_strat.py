import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multistrat.errors import ArgumentError
from multistrat.funcs import Exp, FunctionTuple, Poly, Sin, constant_ones
from multistrat.harness.suites import mixed_tuple
from multistrat.harness.tolerance import tol
from multistrat.multi_index import MultiIndex
from multistrat.oracle import hermite_ito_closed_form, midpoint_strat
from multistrat.paths import RngSeed, gen_brownian
from multistrat.strat import GridFunction, StratMethod, closed_form_constant, eval_I_alpha, strat_integral

N = 2**12


@pytest.fixture(scope="module")
def path():
    return gen_brownian(N, 1.0, RngSeed(101))


@pytest.mark.parametrize("method", list(StratMethod))
def test_order_one_ones_is_the_path(path, method):
    got = strat_integral(constant_ones(1), path, method)
    assert np.allclose(got.values, path.values, atol=1e-14)


def test_order_two_recursion_identity(path):
    # left-point sums: sum W dW = (W^2 - sum dW^2) / 2, so the recursion
    # gives W^2/2 + (t - [W]_t)/2 with [W] the discrete quadratic variation
    got = strat_integral(constant_ones(2), path, StratMethod.RECURSION).values
    qv = np.concatenate(([0.0], np.cumsum(path.increments**2)))
    expected = 0.5 * path.values**2 + 0.5 * (path.times - qv)
    assert np.allclose(got, expected, atol=1e-12)


def test_order_two_expansion_is_exact(path):
    got = strat_integral(constant_ones(2), path, StratMethod.EXPANSION).values
    assert np.allclose(got, 0.5 * path.values**2, atol=1e-13)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_gnsum_equals_recursion(path, n):
    tup = mixed_tuple(n)
    a = strat_integral(tup, path, StratMethod.GNSUM).values
    b = strat_integral(tup, path, StratMethod.RECURSION).values
    assert np.max(np.abs(a - b)) < 1e-12


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_three_way_and_midpoint_agree(path, n):
    tup = mixed_tuple(n)
    vals = [strat_integral(tup, path, m).values for m in StratMethod]
    vals.append(midpoint_strat(tup, path).values)
    for v in vals[1:]:
        assert np.max(np.abs(v - vals[0])) <= tol(N)


def test_deterministic_integrand_order_one(path):
    # int_0^T s dW = T W(T) - int_0^T W ds, by integration by parts
    tup = FunctionTuple((Poly((0.0, 1.0)),), 1.0)
    got = strat_integral(tup, path, StratMethod.RECURSION).terminal
    t, w = path.times, path.values
    ref = w[-1] - float(np.sum(0.5 * (w[1:] + w[:-1]) * np.diff(t)))
    assert got == pytest.approx(ref, abs=tol(N))


def test_iterated_ito_of_ones_matches_hermite(path):
    for n in range(1, 5):
        got = eval_I_alpha(MultiIndex((1,) * n), constant_ones(n), path).terminal
        assert got == pytest.approx(hermite_ito_closed_form(n, path.values[-1], 1.0), abs=tol(N))


def test_ds_step_is_lebesgue(path):
    # alpha = (2,) with f1 = f2 = 1 is int_0^t ds = t
    got = eval_I_alpha(MultiIndex((2,)), constant_ones(2), path)
    assert np.allclose(got.values, path.times)


@settings(max_examples=25, deadline=None)
@given(st.floats(-3, 3), st.integers(1, 4))
def test_linearity_in_first_integrand(c, n):
    w = gen_brownian(256, 1.0, RngSeed(5))
    funcs = (Sin(1.5, 0.2), Exp(-0.3), Poly((0.2, 1.0)), Sin(0.7))[:n]
    scaled = (Poly((c,)),) + funcs
    base = (Poly((1.0,)),) + funcs
    for m in StratMethod:
        a = strat_integral(FunctionTuple(scaled), w, m).values
        b = strat_integral(FunctionTuple(base), w, m).values
        assert np.allclose(a, c * b, atol=1e-10)


def test_closed_form_constant():
    assert closed_form_constant(3, 2.0) == pytest.approx(8 / 6)
    assert closed_form_constant(0, 5.0) == 1.0


def test_errors(path):
    with pytest.raises(ArgumentError):
        eval_I_alpha(MultiIndex((1, 2)), constant_ones(2), path)
    with pytest.raises(ArgumentError):
        GridFunction(np.zeros(3), np.zeros(4))
    with pytest.raises(ValueError):
        strat_integral(constant_ones(1), path, "simpson")


def test_step_integral_examples(path):
    from multistrat.strat import ito_step_integral, lebesgue_step_integral

    t = path.times
    ones = GridFunction(t, np.ones_like(t))
    assert np.allclose(ito_step_integral(Poly((1.0,)), ones, path).values, path.values, atol=1e-13)
    twice = ito_step_integral(Poly((1.0,)), ito_step_integral(Poly((1.0,)), ones, path), path)
    # discrete identity: sum W_{j-1} dW_j = (W_N^2 - sum dW_j^2) / 2
    assert twice.terminal == pytest.approx(0.5 * (path.values[-1] ** 2 - np.sum(path.increments**2)), abs=1e-12)
    zero = GridFunction(t, np.zeros_like(t))
    assert np.all(ito_step_integral(Sin(1.0), zero, path).values == 0.0)
    assert np.allclose(lebesgue_step_integral(Poly((1.0,)), Poly((1.0,)), ones, t).values, t)
    lin = lebesgue_step_integral(Poly((1.0,)), Poly((1.0,)), GridFunction(t, t.copy()), t)
    assert lin.terminal == pytest.approx(0.5, abs=1e-14)
    grid = np.array([0.0, 0.5, 1.0])
    half = lebesgue_step_integral(Poly((0.0, 1.0)), Poly((1.0,)), GridFunction(grid, np.ones(3)), grid)
    assert half.terminal == pytest.approx(0.5)


def test_gnsum_order_two_is_ito_plus_half_t(path):
    ito = eval_I_alpha(MultiIndex((1, 1)), constant_ones(2), path).terminal
    assert strat_integral(constant_ones(2), path, StratMethod.GNSUM).terminal == pytest.approx(ito + 0.5)


@pytest.mark.parametrize("method", list(StratMethod))
def test_order_three_ones_near_cube(path, method):
    got = strat_integral(constant_ones(3), path, method).terminal
    assert got == pytest.approx(path.values[-1] ** 3 / 6, abs=tol(N))
