import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iss.numerics import Bracket, BracketError, ConvergenceError, bisect_root, cap, dual_bisect, pos


@pytest.mark.parametrize("x, expected", [(0, 0.0), (1, 1.0), (3, 2.0)])
def test_cap_values(x, expected):
    assert cap(x) == pytest.approx(expected, abs=1e-15)


def test_cap_rejects_negative():
    with pytest.raises(ValueError):
        cap(-1e-3)


def test_cap_elementwise():
    np.testing.assert_allclose(cap(np.array([0.0, 1.0, 3.0, 7.0])), [0, 1, 2, 3], atol=1e-15)


@given(st.floats(0, 1e6), st.floats(0, 1e6))
def test_cap_midpoint_concave(x, y):
    assert cap((x + y) / 2) >= (cap(x) + cap(y)) / 2 - 1e-12


def test_pos():
    assert pos(-2.0) == 0.0
    np.testing.assert_array_equal(pos(np.array([-1.0, 0.5])), [0.0, 0.5])


def test_bracket_validation():
    with pytest.raises(ValueError):
        Bracket(1.0, 1.0)
    with pytest.raises(ValueError):
        Bracket(0.0, 1.0, tol_x=0)
    with pytest.raises(ValueError):
        Bracket(0.0, 1.0, max_iter=0)


@pytest.mark.parametrize("f, lo, hi, root", [
    (lambda x: x - 2, 0, 10, 2.0),
    (lambda x: x * x - x - 6, 0, 10, 3.0),  # (x - 3)(x + 2)
    (lambda x: x, -1, 1, 0.0),
])
def test_bisect_root_examples(f, lo, hi, root):
    x = bisect_root(f, Bracket(lo, hi))
    assert abs(f(x)) <= 1e-9 or abs(x - root) <= 1e-10
    assert x == pytest.approx(root, abs=1e-8)


def test_bisect_root_no_sign_change():
    with pytest.raises(BracketError):
        bisect_root(lambda x: x * x + 1, Bracket(-1, 1))


def test_bisect_root_max_iter_carries_best():
    with pytest.raises(ConvergenceError) as info:
        bisect_root(lambda x: x - math.pi, Bracket(0, 10, tol_x=1e-300, tol_f=1e-300, max_iter=5))
    assert info.value.best is not None
    assert abs(info.value.best - math.pi) < 1.0


@settings(max_examples=200)
@given(st.lists(st.floats(0.01, 10), min_size=2, max_size=8), st.floats(-5, 5),
       st.booleans())
def test_bisect_root_on_monotone_piecewise_linear(slopes, offset, increasing):
    knots = np.linspace(-10, 10, len(slopes) + 1)
    vals = np.concatenate([[0.0], np.cumsum(np.diff(knots) * slopes)]) - offset - sum(slopes)

    def f(x):
        y = np.interp(x, knots, vals)
        return y if increasing else -y

    if np.sign(f(-10.0)) == np.sign(f(10.0)):
        return
    b = Bracket(-10, 10, tol_x=1e-14, tol_f=1e-9)
    x = bisect_root(f, b)
    # the width criterion can fire first, leaving at most slope * tol_x
    assert abs(f(x)) <= 1e-9 + 1e-14 * max(slopes)


@pytest.mark.parametrize("power, budget, expected", [
    (lambda lam: 1.0 / lam, 2.0, 0.5),
    (lambda lam: max(4.0 - lam, 0.0), 1.0, 3.0),
    # one subcarrier of single-user water-filling with unit gain
    (lambda lam: max(1.0 / (math.log(2) * lam) - 1.0, 0.0), 1.0, 1.0 / (2 * math.log(2))),
])
def test_dual_bisect_examples(power, budget, expected):
    lam = dual_bisect(power, budget)
    assert lam == pytest.approx(expected, rel=1e-8)
    assert abs(power(lam) - budget) <= 1e-9 * budget


def test_dual_bisect_expands_upper_end():
    lam = dual_bisect(lambda x: 1e3 / x, 1.0)
    assert lam == pytest.approx(1e3, rel=1e-9)


def test_dual_bisect_flat_plateau_at_budget():
    # flat at the budget over [2, 3]: any price there is acceptable
    def power(lam):
        return 5.0 - lam if lam < 2 else (3.0 if lam < 3 else max(6.0 - lam, 0.0))

    lam = dual_bisect(power, 3.0)
    assert abs(power(lam) - 3.0) <= 3e-9


def test_dual_bisect_unreachable_budget():
    with pytest.raises(ConvergenceError):
        dual_bisect(lambda lam: 0.5, 1.0)


@settings(max_examples=100)
@given(st.lists(st.floats(0.05, 20), min_size=1, max_size=16), st.floats(0.1, 200))
def test_dual_bisect_meets_budget_for_water_filling(gains, budget):
    g = np.array(gains)

    def power(lam):
        return float(np.mean(np.maximum(1 / (math.log(2) * lam) - 1 / g, 0)))

    lam = dual_bisect(power, budget)
    assert abs(power(lam) - budget) <= 1e-9 * budget
