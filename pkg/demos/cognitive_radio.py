"""
A primary user and a smarter secondary user
===========================================

The primary user has a large budget and runs conventional water-filling.
The low-power secondary user either does the same (case 1) or decodes the
primary's signal whenever it can (case 2). Both use one codeword over all
subcarriers.
"""

from iss import experiments as ex

cfg = ex.ExperimentConfig(rho_list=[0.1, 1.0], budgets=(100.0, 1.0), realizations=20, seed=0)
for row in ex.cmd_cognitive(cfg):
    print(f"rho={row['rho']:g}: primary {row['u1_rate_case1']:.3f} -> {row['u1_rate_case2']:.3f} "
          f"({row['u1_drop_pct']:+.1f}% drop), secondary {row['u2_rate_case1']:.3f} -> "
          f"{row['u2_rate_case2']:.3f} ({row['u2_gain_pct']:+.1f}% gain)")
