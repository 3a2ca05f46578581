"""Best response under carrier independent encoding.

The average-power constraint is dualized with a price ``lam``; for a fixed
price every subcarrier is solved in closed form and the price is then
searched so that the allocation uses exactly the budget.
"""

from dataclasses import dataclass

import numpy as np

from .numerics import LN2, dual_bisect
from .rate_model import DecodingMethod, Encoding, InterferenceView, SubcarrierView, cie_rates, threshold_powers


@dataclass
class CieUpdate:
    powers: np.ndarray
    rates: np.ndarray
    methods: np.ndarray
    dual_price: float
    avg_rate: float
    budget: float

    @property
    def decoding_methods(self):
        return [DecodingMethod(int(m)) for m in self.methods]


def water_level(price):
    return 1.0 / (LN2 * price)


def water_fill(level, h_dir, interference):
    """Water-filling power over a noise floor of ``(1 + interference) / h_dir``."""
    with np.errstate(divide="ignore"):
        floor = (1.0 + interference) / h_dir
    return np.maximum(level - floor, 0.0)


def p3_powers(h_dir, interference, r_other, price):
    """Per-subcarrier maximizer of rate minus ``price * power``.

    Vectorized; returns ``(powers, methods)``.
    """
    level = water_level(price)
    p_f = water_fill(level, h_dir, 0.0)
    p_h = water_fill(level, h_dir, interference)
    pth = threshold_powers(h_dir, interference, r_other)

    succ_full = pth >= p_f
    succ_cap = ~succ_full & (pth > p_h)
    joint = ~succ_full & ~succ_cap & (pth >= 0)
    powers = np.select([succ_full, succ_cap], [p_f, pth], default=p_h)
    methods = np.select([succ_full | succ_cap, joint],
                        [DecodingMethod.SUCCESSIVE, DecodingMethod.JOINT],
                        default=DecodingMethod.SINGLE_USER)
    return powers, methods.astype(int)


def p3_optimum(v: SubcarrierView, lam: float):
    """Optimal power and decoder on one subcarrier at dual price ``lam``."""
    if not lam > 0:
        raise ValueError("dual price must be positive")
    p, m = p3_powers(np.array([v.h_dir]), np.array([v.h_cross * v.p_other]),
                     np.array([v.r_other]), lam)
    return float(p[0]), DecodingMethod(int(m[0]))


def solve_p1(view: InterferenceView, budget: float) -> CieUpdate:
    """Rate-maximizing allocation with per-subcarrier codewords and decoders."""
    if view.encoding is not Encoding.CIE:
        raise ValueError("solve_p1 needs a CIE view")
    h, c, r = view.h_dir, view.interference, view.r_other

    lam = dual_bisect(lambda x: float(np.mean(p3_powers(h, c, r, x)[0])), budget)
    powers, methods = p3_powers(h, c, r, lam)
    rates, _ = cie_rates(h, c, r, powers)
    methods = np.where(powers > 0, methods, int(DecodingMethod.SINGLE_USER))
    return CieUpdate(powers, rates, methods, lam, float(np.mean(rates)), budget)
