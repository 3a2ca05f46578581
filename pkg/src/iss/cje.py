"""Best response under carrier joint encoding.

For a fixed power price ``mu`` the optimum is one of three allocations:
water-filling over the bare noise floor (interferer decoded first),
water-filling over noise plus interference, or, between those two, a
biased water-filling whose level is scaled by a factor depending on the
allocated power itself. The biased case carries a second price ``nu`` that
pins the interferer's decodability constraint to equality.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .cie import water_fill, water_level
from .numerics import DUAL_BRACKET, LN2, Bracket, ConvergenceError, _cap, bisect_root, dual_bisect
from .rate_model import DecodingMethod, Encoding, InterferenceView, cje_rate_arrays

log = logging.getLogger(__name__)

NU_TOL = 1e-8


@dataclass
class CjeUpdate:
    powers: np.ndarray
    rate: float
    method: DecodingMethod
    dual_price: float
    constraint_price: float
    budget: float

    @property
    def avg_rate(self):
        return self.rate


def bias_factor(x, h_dir, h_cross_p, nu):
    return (1.0 + h_dir * x) / (1.0 + h_dir * x + nu * h_cross_p)


def biased_root(h_dir: float, h_cross_p: float, mu: float, nu: float) -> float:
    """Root of ``x = G(x) - zeta`` by bisection on ``[0, G(0) - zeta]``.

    ``G(x) = 1 / (ln2 * mu * F(x))`` is the biased water level and
    ``zeta = (1 + h_cross_p) / h_dir`` the noise-plus-interference floor.
    Returns 0 when the biased level at zero power does not clear the floor.
    """
    if not (h_dir > 0 and mu > 0 and nu > 0 and h_cross_p >= 0):
        raise ValueError("biased_root needs h_dir, mu, nu > 0 and h_cross_p >= 0")
    level = water_level(mu)
    zeta = (1.0 + h_cross_p) / h_dir

    def g(x):
        return level / bias_factor(x, h_dir, h_cross_p, nu)

    x_max = g(0.0) - zeta
    if x_max <= 0:
        return 0.0
    br = Bracket(0.0, x_max, tol_x=1e-14 * max(1.0, x_max), tol_f=1e-13 * max(1.0, x_max), max_iter=400)
    return bisect_root(lambda x: g(x) - zeta - x, br)


def _biased_map(h_dir, interference, level):
    """Return ``nu -> powers`` for fixed gains and water level.

    Substituting ``y = 1 + h_dir * x`` turns the fixed point into the
    quadratic ``y^2 + (c - h W) y - h W nu c = 0`` (``W`` the level, ``c``
    the interference); its positive root is taken in a cancellation-free
    form.
    """
    h = np.asarray(h_dir, dtype=float)
    c = np.asarray(interference, dtype=float)
    live = h > 0
    hw = h * level
    b = hw - c
    b2 = b * b
    k = 4.0 * hw * c
    two_hwc = 2.0 * hw * c
    pos_b = b >= 0
    inv_h = np.divide(1.0, h, out=np.zeros_like(h), where=live)
    floor = 1.0 + c

    def powers(nu):
        disc = np.sqrt(b2 + k * nu)
        denom = disc - b
        y = np.where(pos_b, 0.5 * (b + disc), two_hwc * nu / np.where(pos_b, 1.0, denom))
        active = live & (hw * (1.0 + nu * c) > floor)
        return np.where(active, np.maximum((y - 1.0) * inv_h, 0.0), 0.0)

    return powers


def biased_powers(h_dir, interference, level, nu):
    """Vectorized biased water-filling at water level ``level``."""
    return _biased_map(h_dir, interference, level)(nu)


def _decodable_rate(h_dir, interference, p):
    # average rate at which the interferer can be decoded first
    return float(np.log1p(interference / (1.0 + h_dir * p)).sum() / (LN2 * p.size))


def solve_p6(view: InterferenceView, other_rate: float, mu: float):
    """Biased water-filling with the decodability constraint tight.

    Returns ``(powers, nu)``; the constraint value is >= ``other_rate`` and
    within ``NU_TOL`` of it.
    """
    h, c = view.h_dir, view.interference
    powers_at = _biased_map(h, c, water_level(mu))

    def g(nu):
        return _decodable_rate(h, c, powers_at(nu)) - other_rate

    if g(0.0) <= 0:
        return powers_at(0.0), 0.0
    hi = 1.0
    for _ in range(200):
        if g(hi) <= 0:
            break
        hi *= 2.0
    else:
        raise ConvergenceError("no upper bracket for the constraint price", best=hi)

    xtol, rtol = 1e-15, 4 * np.finfo(float).eps
    nu = optimize.brentq(g, 0.0, hi, xtol=xtol, rtol=rtol, maxiter=200)
    # brentq brackets the root within xtol + rtol*nu; step to the feasible side
    for cand in (nu, nu - 2.0 * (xtol + rtol * nu), nu * (1 - 1e-9)):
        cand = max(cand, 0.0)
        resid = g(cand)
        if 0 <= resid <= NU_TOL:
            return powers_at(cand), cand
    raise ConvergenceError(f"constraint residual {g(nu):.3e} above {NU_TOL}", best=nu)


def p2_inner(view: InterferenceView, other_rate: float, mu: float):
    """Maximizer of the CJE rate minus ``mu`` times mean power.

    Returns ``(powers, method, nu)``.
    """
    if not mu > 0:
        raise ValueError("mu must be positive")
    h, c = view.h_dir, view.interference
    level = water_level(mu)
    p_h = water_fill(level, h, c)
    if other_rate > _cap(c).mean():
        return p_h, DecodingMethod.SINGLE_USER, 0.0
    p_f = water_fill(level, h, 0.0)
    if _decodable_rate(h, c, p_f) >= other_rate:
        return p_f, DecodingMethod.SUCCESSIVE, 0.0
    if _decodable_rate(h, c, p_h) <= other_rate:
        return p_h, DecodingMethod.JOINT, 0.0
    powers, nu = solve_p6(view, other_rate, mu)
    return powers, DecodingMethod.SUCCESSIVE, nu


def _scan_fallback(total, budget, mu_hi):
    # grid scan of the price followed by local bisection at every crossing
    mus = np.geomspace(DUAL_BRACKET.lo, mu_hi, 2001)
    resid = np.array([total(m) for m in mus]) - budget
    roots = []
    for i in np.flatnonzero((resid[:-1] >= 0) & (resid[1:] <= 0)):
        br = Bracket(mus[i], mus[i + 1], tol_x=1e-15 * mus[i + 1], tol_f=DUAL_BRACKET.tol_f * budget)
        try:
            roots.append(bisect_root(lambda m: total(m) - budget, br))
        except ConvergenceError as err:
            roots.append(err.best)
    if not roots:
        raise ConvergenceError("price scan found no power crossing")
    return roots


def solve_p2(view: InterferenceView, budget: float) -> CjeUpdate:
    """Rate-maximizing allocation with one codeword spanning all subcarriers."""
    if view.encoding is not Encoding.CJE:
        raise ValueError("solve_p2 needs a CJE view")
    r2 = view.other_rate_total
    samples = []

    def total(mu):
        p = float(np.mean(p2_inner(view, r2, mu)[0]))
        samples.append((mu, p))
        return p

    try:
        mu = dual_bisect(total, budget)
        monotone = _is_nonincreasing(samples, budget)
    except ConvergenceError:
        mu, monotone = None, False

    if monotone:
        candidates = [mu]
    else:
        log.warning("CJE power map not monotone in the price; falling back to a grid scan")
        mu_hi = max(m for m, _ in samples) if samples else 1.0
        candidates = _scan_fallback(total, budget, mu_hi)

    best = None
    for m in candidates:
        powers, _, nu = p2_inner(view, r2, m)
        rate, method = cje_rate_arrays(view.h_dir, view.interference, powers, r2)
        if best is None or rate > best.rate:
            best = CjeUpdate(powers, rate, method, m, nu, budget)
    return best


def _is_nonincreasing(samples, budget):
    pts = sorted(samples)
    p = np.array([s[1] for s in pts])
    return bool(np.all(np.diff(p) <= 1e-9 * max(budget, 1.0)))


__all__ = ["CjeUpdate", "biased_root", "biased_powers", "bias_factor",
           "solve_p6", "p2_inner", "solve_p2"]
