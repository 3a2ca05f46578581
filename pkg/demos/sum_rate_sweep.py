"""
Sum rate versus cross-channel strength
======================================

A small Monte Carlo sweep. Each row averages over the realizations that
converged; ``avg_sum_rate_all`` keeps every realization. Increase
``realizations`` for smoother numbers (the command-line ``iss sweep`` runs
the same code).
"""

from iss import experiments as ex

cfg = ex.ExperimentConfig(rho_list=[0.1, 1.0, 10.0], realizations=10, seed=0)
rows = ex.cmd_sweep(cfg)

print(f"{'rho':>5} {'algorithm':>8} {'converged':>9} {'sum(conv)':>9} {'sum(all)':>9} {'overlap':>8}")
for r in rows:
    print(f"{r['rho']:5.1f} {r['algorithm']:>8} {r['n_converged']:5d}/{r['n_realizations']:<3d} "
          f"{r['avg_sum_rate']:9.3f} {r['avg_sum_rate_all']:9.3f} {r['median_overlap']:8.4f}")
