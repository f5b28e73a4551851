import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multistrat.errors import ArgumentError
from multistrat.funcs import Exp, FunctionTuple, Poly, Sin, constant_ones
from multistrat.harness.suites import mixed_tuple
from multistrat.oracle import SimplexQuadSpec, brute_force_J
from multistrat.ordinary import (
    RefinedGridFunction,
    ordinary_multiple,
    ordinary_via_decomposition,
    relative_sup_difference,
    stieltjes_step,
    sup_error,
)
from multistrat.paths import PiecewiseLinearPath, RngSeed, gen_brownian, gen_transport, polygonal, transport_path


@pytest.fixture(scope="module")
def tpath():
    return gen_transport(20.0, 1.0, RngSeed(202))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_ones_give_powers_of_the_path(tpath, n):
    # for unit integrands the ordinary iterated integral is W(t)^n / n!
    lv = ordinary_multiple(constant_ones(n), tpath, delta=1 / 512)
    w = tpath(lv[n].times)
    assert np.max(np.abs(lv[n].values - w**n / math.factorial(n))) < 1e-12


def test_level_zero_is_one(tpath):
    lv = ordinary_multiple(mixed_tuple(2), tpath, delta=1 / 256)
    assert len(lv) == 3
    assert np.all(lv[0].values == 1.0)


def test_straight_line_closed_form():
    # W(t) = t: J_2(T) = int_0^T e^s (1 - cos s) ds for f1 = sin, f2 = exp
    T = 1.0
    p = PiecewiseLinearPath(np.array([0.0, T]), np.array([0.0, T]))
    tup = FunctionTuple((Sin(1.0), Exp(1.0)), T)
    exact = (math.e - 1) - 0.5 * (math.e * (math.cos(1) + math.sin(1)) - 1)
    got = ordinary_multiple(tup, p, delta=1 / 1024)[2].terminal
    assert got == pytest.approx(exact, abs=1e-11)
    plain = ordinary_multiple(tup, p, delta=1 / 1024, rule="trapezoid")[2].terminal
    assert plain == pytest.approx(exact, abs=1e-6)


def test_trapezoid_rule_is_second_order():
    T = 1.0
    p = PiecewiseLinearPath(np.array([0.0, 0.4, T]), np.array([0.0, 0.8, -0.1]))
    tup = FunctionTuple((Exp(1.0), Sin(2.0, 0.1), Poly((1.0, 1.0))), T)
    ref = ordinary_multiple(tup, p, delta=1 / 4096)[3].terminal
    e1 = abs(ordinary_multiple(tup, p, 1 / 64, "trapezoid")[3].terminal - ref)
    e2 = abs(ordinary_multiple(tup, p, 1 / 128, "trapezoid")[3].terminal - ref)
    assert 3.0 < e1 / e2 < 5.0


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("kind", ["transport", "polygonal"])
def test_decomposition_matches_recursion(n, kind):
    if kind == "transport":
        p = gen_transport(50.0, 1.0, RngSeed(303))
    else:
        p = polygonal(gen_brownian(2**12, 1.0, RngSeed(304)), 256)
    tup = mixed_tuple(n)
    lv = ordinary_multiple(tup, p, delta=1 / 2**12)
    dec = ordinary_via_decomposition(tup, p, lv[:n], delta=1 / 2**12)
    assert relative_sup_difference(lv[n], dec) <= 1e-6


@pytest.mark.parametrize("n", [2, 3])
def test_brute_force_oracle(tpath, n):
    tup = mixed_tuple(n)
    ref = brute_force_J(tup, tpath, SimplexQuadSpec(n, 2**11))
    assert ordinary_multiple(tup, tpath)[n].terminal == pytest.approx(ref, abs=1e-4)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.floats(0.01, 0.99), min_size=0, max_size=8, unique=True), st.integers(0, 1))
def test_brute_force_on_random_transport_paths(jumps, bit):
    p = transport_path(9.0, 1.0, bit, jumps)
    tup = FunctionTuple((Poly((1.0, -0.5)), Exp(0.4)), 1.0)
    ref = brute_force_J(tup, p, SimplexQuadSpec(2, 512))
    assert ordinary_multiple(tup, p, delta=1 / 512)[2].terminal == pytest.approx(ref, abs=1e-4)


def test_stieltjes_step_requires_knots(tpath):
    t = np.linspace(0.0, 1.0, 11)
    with pytest.raises(ArgumentError):
        stieltjes_step(Poly((1.0,)), RefinedGridFunction(t, np.ones_like(t)), tpath)


def test_unknown_rule(tpath):
    with pytest.raises(ArgumentError):
        ordinary_multiple(constant_ones(1), tpath, rule="simpson")


def test_sup_error_on_different_grids():
    a = RefinedGridFunction(np.array([0.0, 1.0]), np.array([0.0, 1.0]))
    b = RefinedGridFunction(np.array([0.0, 0.5, 1.0]), np.array([0.0, 0.0, 1.0]))
    assert sup_error(a, b) == pytest.approx(0.5)


def test_stieltjes_step_examples():
    chord = PiecewiseLinearPath(np.array([0.0, 1.0]), np.array([0.0, 1.0]))
    t = np.linspace(0.0, 1.0, 9)
    out = stieltjes_step(Poly((1.0,)), RefinedGridFunction(t, t.copy()), chord, rule="trapezoid")
    assert out.terminal == pytest.approx(0.5, abs=1e-15)
    tent = transport_path(1.0, 1.0, 0, [0.5])
    t = np.linspace(0.0, 1.0, 5)
    out = stieltjes_step(Poly((1.0,)), RefinedGridFunction(t, np.ones_like(t)), tent)
    assert np.allclose(out.values, tent(t))
    assert out.terminal == pytest.approx(0.0, abs=1e-15)


def test_chord_order_two():
    chord = PiecewiseLinearPath(np.array([0.0, 1.0]), np.array([0.0, 1.0]))
    assert ordinary_multiple(constant_ones(2), chord, 1 / 16)[2].terminal == pytest.approx(0.5, abs=1e-15)


def test_order_one_decomposition_formula(tpath):
    # J_1(t) = W(t) f(t) - int_0^t W(s) f'(s) ds
    tup = FunctionTuple((Sin(2.0, 0.3),), 1.0)
    lv = ordinary_multiple(tup, tpath, 1 / 4096)
    t = lv[1].times
    w = tpath(t)
    h = w * Sin(2.0, 0.3).deriv(t)
    integral = np.concatenate(([0.0], np.cumsum(0.5 * np.diff(t) * (h[:-1] + h[1:]))))
    assert np.allclose(lv[1].values, w * Sin(2.0, 0.3).value(t) - integral, atol=1e-6)
    ones = ordinary_via_decomposition(constant_ones(1), tpath, lv[:1], 1 / 4096)
    assert np.allclose(ones.values, tpath(ones.times), atol=1e-14)


def test_sup_error_examples():
    t = np.linspace(0.0, 1.0, 5)
    a = RefinedGridFunction(t, np.sin(t))
    assert sup_error(a, a) == 0.0
    assert sup_error(RefinedGridFunction(t, np.zeros(5)), RefinedGridFunction(t, np.full(5, 2.0))) == 2.0
    bump = np.zeros(5)
    bump[2] = 0.3
    assert sup_error(RefinedGridFunction(t, np.zeros(5)), RefinedGridFunction(t, bump)) == pytest.approx(0.3)


def test_trapezoid_refinement_against_oracle():
    # halving delta shrinks the trapezoid error against the brute-force value by >= 3
    tup = mixed_tuple(2)
    ratios = []
    for i in range(10):
        p = gen_transport(8.0, 1.0, RngSeed(7, i))
        ref = brute_force_J(tup, p, SimplexQuadSpec(2, 2**13))
        e1 = abs(ordinary_multiple(tup, p, 1 / 32, "trapezoid")[2].terminal - ref)
        e2 = abs(ordinary_multiple(tup, p, 1 / 64, "trapezoid")[2].terminal - ref)
        ratios.append(e1 / e2)
    assert np.median(ratios) >= 3.0
