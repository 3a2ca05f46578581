"""
Best response with per-subcarrier codewords
===========================================

With one codeword per subcarrier, every subcarrier picks its own decoder.
The power budget couples them through a single price found by bisection.
We compare against plain water-filling that treats interference as noise.
"""

import numpy as np

from iss import InterferenceView, solve_iwf, solve_p1

rng = np.random.default_rng(1)
n = 16
h = rng.exponential(1.0, n)
h_cross = rng.exponential(3.0, n)
p_other = rng.uniform(0, 20, n)
# the opponent sends at a fraction of what it could over its own link
r_other = rng.uniform(0.2, 1.5, n) * np.log2(1 + h_cross * p_other) / 2

view = InterferenceView(h, h_cross, p_other, r_other)
budget = 10.0

iss = solve_p1(view, budget)
iwf = solve_iwf(view, budget)

print(f"price {iss.dual_price:.4f}, mean power {iss.powers.mean():.6f} (budget {budget})")
print(f"average rate: decode-aware {iss.avg_rate:.4f}  noise-only {iwf.avg_rate:.4f}")
print()
print(" n   gain  interf   r_other   p_iss   p_iwf  method")
for k in range(n):
    print(f"{k:2d} {h[k]:6.2f} {h_cross[k] * p_other[k]:7.2f} {r_other[k]:9.3f} "
          f"{iss.powers[k]:7.3f} {iwf.powers[k]:7.3f}  {iss.decoding_methods[k].name}")
