"""
Decoding regimes on one subcarrier
==================================

A receiver that knows the interferer's codebook can do better than treating
it as noise. Depending on the interferer's rate and our own power, it can
decode the interferer first and cancel it, decode both jointly, or fall back
to single-user detection. This script walks the rate curve of one subcarrier.
"""

import numpy as np

from iss import SubcarrierView, p_threshold, rate_cie
from iss.cie import p3_optimum

# unit gains, interferer at power 1 sending 0.5 bit
view = SubcarrierView(h_dir=1.0, h_cross=1.0, p_other=1.0, r_other=0.5)

# below the threshold power the interferer is decodable first
pth = p_threshold(view)
print(f"threshold power: {pth:.6f} (sqrt 2 = {np.sqrt(2):.6f})")

for p in [0.5, 1.0, pth, 2.0, 4.0]:
    r, m = rate_cie(view, p)
    sd = np.log2(1 + p / 2)
    print(f"p={p:6.3f}  rate={r:.4f} ({m.name:11s})  noise-only rate={sd:.4f}")

# a fast interferer can never be decoded: single-user detection only
fast = SubcarrierView(1.0, 1.0, 1.0, r_other=1.5)
print("interferer at 1.5 bit:", rate_cie(fast, 3.0))

# %%
# Per-subcarrier optimum as the power price falls
# ------------------------------------------------
# At a high price we water-fill as if the interference were gone, then the
# power sticks at the threshold for a range of prices, and finally joint
# decoding takes over with water-filling over noise plus interference.

for lam in [0.8, 0.65, 0.55, 0.5, 0.45, 0.4, 0.3]:
    p, m = p3_optimum(view, lam)
    print(f"price {lam:4.2f}: power {p:.4f} via {m.name}")
