"""Conventional iterative water-filling best response (interference as noise)."""

import numpy as np

from .cie import CieUpdate, water_fill, water_level
from .numerics import dual_bisect
from .rate_model import DecodingMethod, InterferenceView, sd_rates


def solve_iwf(view: InterferenceView, budget: float) -> CieUpdate:
    """Single-user-detection water-filling; works for either encoding."""
    h, c = view.h_dir, view.interference
    lam = dual_bisect(lambda x: float(np.mean(water_fill(water_level(x), h, c))), budget)
    powers = water_fill(water_level(lam), h, c)
    rates = sd_rates(h, c, powers)
    methods = np.full(h.size, int(DecodingMethod.SINGLE_USER))
    return CieUpdate(powers, rates, methods, lam, float(np.mean(rates)), budget)
