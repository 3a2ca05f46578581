"""
Best response with one codeword over all subcarriers
====================================================

With a single codeword the receiver decodes the interferer on all
subcarriers or on none. Between the two water-filling extremes sits a biased
water-filling: the water level is raised on each subcarrier by a factor that
depends on its own power, just enough to keep the interferer decodable.
"""

import numpy as np

from iss import InterferenceView, biased_root, p2_inner, solve_p2, solve_iwf
from iss.rate_model import Encoding

# the biased level solves x = level / F(x) - floor; here x = 3 exactly
mu = 1 / (np.log(2) * 4.0)
print("biased root, level 4, unit gains:", biased_root(1.0, 1.0, mu, 1.0))

# two identical subcarriers with water level 4: sweep the interferer's rate
view = InterferenceView([1.0, 1.0], [1.0, 1.0], [1.0, 1.0], encoding=Encoding.CJE)
for r2 in [0.1, 0.33, 0.36, 0.40, 0.6, 2.0]:
    p, m, nu = p2_inner(view, r2, mu)
    print(f"R2={r2:4.2f}: powers {np.round(p, 4)}  {m.name:11s} nu={nu:.4f}")

# %%
# Full solve against a random opponent
# ------------------------------------
rng = np.random.default_rng(3)
n = 32
h, hc = rng.exponential(1.0, n), rng.exponential(3.0, n)
p_other = rng.uniform(0, 10, n)
r2 = 0.6 * np.mean(np.log2(1 + hc * p_other))
view = InterferenceView(h, hc, p_other, other_rate_total=r2, encoding=Encoding.CJE)
up = solve_p2(view, 10.0)
print(f"\nCJE rate {up.rate:.4f} via {up.method.name}, mu={up.dual_price:.4f}, nu={up.constraint_price:.4f}")
print(f"noise-only rate {solve_iwf(view, 10.0).avg_rate:.4f}")
