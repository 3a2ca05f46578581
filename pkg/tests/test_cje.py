import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iss.cie import solve_p1, water_fill
from iss.cje import NU_TOL, bias_factor, biased_powers, biased_root, p2_inner, solve_p2, solve_p6
from iss.iwf import solve_iwf
from iss.rate_model import DecodingMethod as DM, Encoding, rate_cje

from helpers import make_view, mu_for_level
from oracles import c2, grid_best, random_instance, rates_cje_grid

pos_gain = st.floats(0.05, 20)
level = st.floats(0.05, 100)
nus = st.floats(1e-6, 50)


def cje_view(h, hc, po, r2):
    return make_view(h, hc, po, encoding=Encoding.CJE, other_rate=r2)


def constraint_value(h, c, p):
    return float(np.mean(c2(c / (1 + h * p))))


@pytest.mark.parametrize("lvl, expected", [(4.0, 3.0), (1.0, 0.0)])
def test_biased_root_examples(lvl, expected):
    assert biased_root(1.0, 1.0, mu_for_level(lvl), 1.0) == pytest.approx(expected, abs=1e-9)


def test_biased_root_small_nu_is_plain_water_filling():
    for lvl, c, h in [(4.0, 1.0, 1.0), (10.0, 3.0, 0.5), (0.5, 0.2, 2.0)]:
        x = biased_root(h, c, mu_for_level(lvl), 1e-12)
        assert x == pytest.approx(max(lvl - (1 + c) / h, 0.0), abs=1e-9)


def test_biased_root_validation():
    with pytest.raises(ValueError):
        biased_root(0.0, 1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        biased_root(1.0, 1.0, 1.0, 0.0)


@settings(max_examples=300)
@given(pos_gain, st.floats(0.0, 50), level, nus)
def test_biased_root_properties(h, c, lvl, nu):
    mu = mu_for_level(lvl)
    x = biased_root(h, c, mu, nu)
    p_h = max(lvl - (1 + c) / h, 0.0)
    assert x >= p_h - 1e-9
    if x > 0:
        # fixed point of the biased water level
        g = lvl / bias_factor(x, h, c, nu)
        assert x == pytest.approx(g - (1 + c) / h, abs=1e-8 * max(1.0, g))
    # closed form used in the solver agrees with the bisection route
    xc = biased_powers(np.array([h]), np.array([c]), lvl, nu)[0]
    assert xc == pytest.approx(x, abs=1e-8 * max(1.0, x))


@settings(max_examples=200)
@given(pos_gain, st.floats(0.01, 50), level, nus)
def test_biased_level_decreasing(h, c, lvl, nu):
    xs = np.linspace(0, 50, 200)
    g = lvl / bias_factor(xs, h, c, nu)
    assert np.all(np.diff(g) < 0)


def test_biased_powers_endpoints(rng):
    h, hc, po, _ = random_instance(rng, 32)
    c = hc * po
    np.testing.assert_allclose(biased_powers(h, c, 3.0, 0.0), water_fill(3.0, h, c), atol=1e-12)
    np.testing.assert_allclose(biased_powers(h, c, 3.0, 1.0), water_fill(3.0, h, 0.0), atol=1e-9)


def test_constraint_value_nonincreasing_in_nu(rng):
    grid = np.concatenate([[0.0], np.geomspace(1e-6, 1e3, 300)])
    for _ in range(30):
        h, hc, po, _ = random_instance(rng, 16)
        c = hc * po
        lvl = float(rng.uniform(0.5, 20))
        vals = [constraint_value(h, c, biased_powers(h, c, lvl, nu)) for nu in grid]
        assert np.all(np.diff(vals) <= 1e-13)


def test_solve_p6_single_subcarrier_example():
    mu = mu_for_level(4.0)
    r2 = math.log2(1.25)
    powers, nu = solve_p6(cje_view([1.0], [1.0], [1.0], r2), r2, mu)
    assert powers[0] == pytest.approx(3.0, abs=1e-7)
    assert nu == pytest.approx(1.0, abs=1e-6)


def test_solve_p6_inactive_constraint_gives_plain_water_filling():
    mu = mu_for_level(4.0)
    r2 = math.log2(1 + 1 / 3.0)  # decodable rate exactly at p_h = 2
    powers, nu = solve_p6(cje_view([1.0], [1.0], [1.0], r2), r2, mu)
    assert nu == pytest.approx(0.0, abs=1e-6)
    assert powers[0] == pytest.approx(2.0, abs=1e-6)


def test_solve_p6_residual(rng):
    hits = 0
    for _ in range(200):
        h, hc, po, _ = random_instance(rng, 8)
        c = hc * po
        lvl = float(rng.uniform(0.5, 30))
        lo = constraint_value(h, c, water_fill(lvl, h, c))
        hi = constraint_value(h, c, water_fill(lvl, h, 0.0))
        if not hi < lo:
            continue
        r2 = float(rng.uniform(hi, lo))
        powers, nu = solve_p6(cje_view(h, hc, po, r2), r2, mu_for_level(lvl))
        resid = constraint_value(h, c, powers) - r2
        assert abs(resid) <= NU_TOL
        assert nu > 0
        hits += 1
    assert hits > 50


def test_p2_inner_examples():
    mu = mu_for_level(4.0)
    view = cje_view([1, 1], [1, 1], [1, 1], 0.0)
    p, m, nu = p2_inner(view, 2.0, mu)
    np.testing.assert_allclose(p, [2, 2])
    assert m is DM.SINGLE_USER and nu == 0
    p, m, _ = p2_inner(view, 0.1, mu)
    np.testing.assert_allclose(p, [3, 3])
    assert m is DM.SUCCESSIVE
    p, m, _ = p2_inner(cje_view([1, 1], [1, 1], [0, 0], 0.0), 0.0, mu)
    np.testing.assert_allclose(p, [3, 3])


def test_p2_inner_joint_and_middle_branches():
    mu = mu_for_level(4.0)
    view = cje_view([1, 1], [1, 1], [1, 1], 0.0)
    # E[C(1 / 3)] = 0.415 <= 0.6 <= E[C(1)] = 1: joint
    p, m, _ = p2_inner(view, 0.6, mu)
    np.testing.assert_allclose(p, [2, 2])
    assert m is DM.JOINT
    # between E[C(1/4)] and E[C(1/3)]: biased water-filling
    p, m, nu = p2_inner(view, 0.35, mu)
    assert m is DM.SUCCESSIVE and 0 < nu < 1
    assert np.all((p > 2) & (p < 3))


def test_p2_inner_rejects_bad_price():
    with pytest.raises(ValueError):
        p2_inner(cje_view([1.0], [1.0], [1.0], 0.0), 0.0, 0.0)


def test_solve_p2_no_interference_is_water_filling(rng):
    h = rng.exponential(1.0, 8) + 0.05
    up = solve_p2(cje_view(h, np.ones(8), np.zeros(8), 0.3), 2.0)
    ref = solve_iwf(cje_view(h, np.ones(8), np.zeros(8), 0.3), 2.0)
    assert up.rate == pytest.approx(ref.avg_rate, abs=1e-9)


def test_solve_p2_requires_cje():
    with pytest.raises(ValueError):
        solve_p2(make_view([1.0], [1.0], [1.0]), 1.0)


def test_single_subcarrier_collapses_to_cie(rng):
    for _ in range(100):
        h, hc, po, r = random_instance(rng, 1)
        budget = float(rng.uniform(0.1, 20))
        a = solve_p2(cje_view(h, hc, po, float(r[0])), budget)
        b = solve_p1(make_view(h, hc, po, r), budget)
        assert a.rate == pytest.approx(b.avg_rate, abs=1e-8)


def test_solve_p2_matches_grid_oracle(rng):
    n, budget = 4, 1.0
    for _ in range(10):
        h, hc, po, _ = random_instance(rng, n)
        c = hc * po
        r2 = float(rng.uniform(0, 1.2) * c2(c).mean())
        up = solve_p2(cje_view(h, hc, po, r2), budget)
        best = grid_best(lambda P: rates_cje_grid(h, c, r2, P), n, n * budget, 40)
        assert up.rate >= best - 1e-9
        assert up.rate <= best + 0.05


def test_solve_p2_invariants(rng):
    for _ in range(60):
        h, hc, po, _ = random_instance(rng, 8)
        c = hc * po
        r2 = float(rng.uniform(0, 1.3) * c2(c).mean())
        budget = float(rng.uniform(0.1, 50))
        view = cje_view(h, hc, po, r2)
        up = solve_p2(view, budget)
        assert abs(up.powers.mean() - budget) <= 1e-6 * budget
        rate, method = rate_cje([view[n] for n in range(8)], up.powers, r2)
        assert up.rate == rate and up.method is method
        assert up.rate >= solve_iwf(view, budget).avg_rate - 1e-9
        assert up.constraint_price >= 0
