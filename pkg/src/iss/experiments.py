"""Monte Carlo drivers: sum-rate sweeps, spectrum snapshots and the
primary/secondary (cognitive radio) scenario.

Every driver is a pure function of an ``ExperimentConfig``; realizations
are independent and can be farmed out to worker processes.
"""

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .channel import ChannelConfig, db_to_linear, draw_realization
from .engine import Algorithm, UserConfig, audit_feasibility, run
from .rate_model import DecodingMethod, Encoding

# name -> (algorithm, encoding) used by both users
ALGORITHMS = {
    "IWF": (Algorithm.IWF, Encoding.CIE),
    "ISS-CIE": (Algorithm.ISS, Encoding.CIE),
    "ISS-CJE": (Algorithm.ISS, Encoding.CJE),
}

SWEEP_COLUMNS = ["rho", "algorithm", "encoding", "avg_rate_u1", "avg_rate_u2", "avg_sum_rate",
                 "n_realizations", "n_converged", "seed", "avg_sum_rate_all", "median_overlap"]
SNAPSHOT_COLUMNS = ["subcarrier", "algorithm", "p1", "p2", "method1", "method2", "p1_norm", "p2_norm"]
COGNITIVE_COLUMNS = ["rho", "u1_rate_case1", "u2_rate_case1", "u1_rate_case2", "u2_rate_case2",
                     "u1_drop_pct", "u2_gain_pct", "n_realizations", "n_converged_case1",
                     "n_converged_case2", "seed"]


@dataclass
class ExperimentConfig:
    n_subcarriers: int = 64
    n_taps: int = 16
    rho_list: list = field(default_factory=lambda: [0.1, 0.3, 1.0, 3.0, 10.0])
    rho_unit: str = "linear"
    budgets: tuple = (100.0, 100.0)
    algorithms: list = field(default_factory=lambda: list(ALGORITHMS))
    realizations: int = 200
    seed: int = 0
    eps: float = 1e-4
    max_rounds: int = 50
    realization_index: int = 0

    def __post_init__(self):
        if self.rho_unit not in ("linear", "db"):
            raise ValueError("rho_unit must be 'linear' or 'db'")
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if unknown:
            raise ValueError(f"unknown algorithms {sorted(unknown)}; choose from {list(ALGORITHMS)}")
        if len(self.budgets) != 2 or min(self.budgets) <= 0:
            raise ValueError("budgets must be two positive numbers")
        if self.realizations < 0:
            raise ValueError("realizations must be >= 0")
        self.budgets = tuple(float(b) for b in self.budgets)
        self.rho_list = [float(r) for r in self.rho_list]

    @property
    def rhos(self):
        """Cross-channel powers on the linear scale."""
        vals = np.asarray(self.rho_list, dtype=float)
        return list(db_to_linear(vals) if self.rho_unit == "db" else vals)

    def seed_for(self, k):
        # channels are redrawn for every rho point
        return self.seed + k

    def channel(self, k, rho):
        return ChannelConfig(self.n_subcarriers, self.n_taps, float(rho), self.seed_for(k))

    @classmethod
    def from_dict(cls, d):
        known = set(cls.__dataclass_fields__)
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        return cls(**d)

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self):
        d = asdict(self)
        d["budgets"] = list(self.budgets)
        return d


def overlap(p1, p2, budgets):
    """Mean over subcarriers of min(p1/P1, p2/P2): 0 for disjoint spectra."""
    return float(np.mean(np.minimum(np.asarray(p1) / budgets[0], np.asarray(p2) / budgets[1])))


@dataclass
class RealizationResult:
    index: int
    converged: bool
    rounds: int
    rates: tuple
    overlap: float
    flags: list

    @property
    def sum_rate(self):
        return self.rates[0] + self.rates[1]


def simulate(ch_cfg, index, u1, u2, eps, max_rounds):
    """One engine run on realization ``index``; summary only."""
    ch = draw_realization(ch_cfg, index)
    trace = run(ch, u1, u2, eps=eps, max_rounds=max_rounds)
    p1, p2 = trace.final_powers
    flags = audit_feasibility(ch, trace).flags if trace.converged else []
    return RealizationResult(index, trace.converged, trace.rounds, trace.final_rates,
                             overlap(p1, p2, (u1.budget, u2.budget)), flags)


def _simulate_args(args):
    return simulate(*args)


def ensemble(ch_cfg, u1, u2, n, eps=1e-4, max_rounds=50, jobs=1):
    """Run realizations ``0..n-1``; results come back in index order."""
    tasks = [(ch_cfg, i, u1, u2, eps, max_rounds) for i in range(n)]
    if jobs > 1 and n > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_simulate_args, tasks, chunksize=max(1, n // (4 * jobs))))
    return [simulate(*t) for t in tasks]


def user_configs(name, budgets):
    alg, enc = ALGORITHMS[name]
    return UserConfig(budgets[0], alg, enc), UserConfig(budgets[1], alg, enc)


def _mean(xs):
    return float(np.mean(xs)) if len(xs) else math.nan


def cmd_sweep(cfg: ExperimentConfig, jobs=1):
    """Average rates per (rho, algorithm), over converged realizations."""
    rows = []
    for k, rho in enumerate(cfg.rhos):
        ch_cfg = cfg.channel(k, rho)
        for name in cfg.algorithms:
            u1, u2 = user_configs(name, cfg.budgets)
            res = ensemble(ch_cfg, u1, u2, cfg.realizations, cfg.eps, cfg.max_rounds, jobs)
            conv = [r for r in res if r.converged]
            rows.append({
                "rho": rho,
                "algorithm": name,
                "encoding": "any" if name == "IWF" else ALGORITHMS[name][1].value,
                "avg_rate_u1": _mean([r.rates[0] for r in conv]),
                "avg_rate_u2": _mean([r.rates[1] for r in conv]),
                "avg_sum_rate": _mean([r.sum_rate for r in conv]),
                "n_realizations": len(res),
                "n_converged": len(conv),
                "seed": ch_cfg.seed,
                "avg_sum_rate_all": _mean([r.sum_rate for r in res]),
                "median_overlap": float(np.median([r.overlap for r in res])) if res else math.nan,
            })
    return rows


def cmd_snapshot(cfg: ExperimentConfig):
    """Converged spectra of both users on one realization.

    Returns ``(rows, summary)`` where ``summary`` maps algorithm name to
    spectrum overlap, rates and convergence.
    """
    rho = cfg.rhos[0]
    ch_cfg = cfg.channel(0, rho)
    ch = draw_realization(ch_cfg, cfg.realization_index)
    rows, summary = [], {}
    for name in cfg.algorithms:
        u1, u2 = user_configs(name, cfg.budgets)
        trace = run(ch, u1, u2, eps=cfg.eps, max_rounds=cfg.max_rounds)
        r1, r2 = trace.last(0), trace.last(1)
        for n in range(ch.n_subcarriers):
            rows.append({
                "subcarrier": n,
                "algorithm": name,
                "p1": r1.powers[n],
                "p2": r2.powers[n],
                "method1": DecodingMethod(int(r1.methods[n])).name,
                "method2": DecodingMethod(int(r2.methods[n])).name,
                "p1_norm": r1.powers[n] / cfg.budgets[0],
                "p2_norm": r2.powers[n] / cfg.budgets[1],
            })
        summary[name] = {
            "overlap": overlap(r1.powers, r2.powers, cfg.budgets),
            "rate_u1": trace.final_rates[0],
            "rate_u2": trace.final_rates[1],
            "converged": trace.converged,
            "rounds": trace.rounds,
        }
    return rows, summary


COGNITIVE_CASES = {
    # primary user always runs IWF; both users use one codeword over all subcarriers
    1: (Algorithm.IWF, Algorithm.IWF),
    2: (Algorithm.IWF, Algorithm.ISS),
}


def cognitive_users(case, budgets):
    a1, a2 = COGNITIVE_CASES[case]
    return UserConfig(budgets[0], a1, Encoding.CJE), UserConfig(budgets[1], a2, Encoding.CJE)


def cmd_cognitive(cfg: ExperimentConfig, jobs=1):
    """Primary user on IWF; secondary user on IWF (case 1) or ISS (case 2)."""
    rows = []
    for k, rho in enumerate(cfg.rhos):
        ch_cfg = cfg.channel(k, rho)
        out = {}
        for case in (1, 2):
            u1, u2 = cognitive_users(case, cfg.budgets)
            res = ensemble(ch_cfg, u1, u2, cfg.realizations, cfg.eps, cfg.max_rounds, jobs)
            conv = [r for r in res if r.converged]
            out[case] = (_mean([r.rates[0] for r in conv]), _mean([r.rates[1] for r in conv]),
                         len(conv), len(res))
        (a1, a2, c1, n), (b1, b2, c2, _) = out[1], out[2]
        rows.append({
            "rho": rho,
            "u1_rate_case1": a1, "u2_rate_case1": a2,
            "u1_rate_case2": b1, "u2_rate_case2": b2,
            "u1_drop_pct": 100.0 * (a1 - b1) / a1 if a1 else math.nan,
            "u2_gain_pct": 100.0 * (b2 - a2) / a2 if a2 else math.nan,
            "n_realizations": n, "n_converged_case1": c1, "n_converged_case2": c2,
            "seed": ch_cfg.seed,
        })
    return rows


def cmd_run(cfg: ExperimentConfig, algorithm=None):
    """Full trace of one realization as a JSON-ready dict."""
    name = algorithm or cfg.algorithms[0]
    rho = cfg.rhos[0]
    ch_cfg = cfg.channel(0, rho)
    ch = draw_realization(ch_cfg, cfg.realization_index)
    u1, u2 = user_configs(name, cfg.budgets)
    trace = run(ch, u1, u2, eps=cfg.eps, max_rounds=cfg.max_rounds)
    report = audit_feasibility(ch, trace)
    return {
        "config": cfg.to_dict(),
        "algorithm": name,
        "rho": rho,
        "channel_seed": ch_cfg.seed,
        "realization_index": cfg.realization_index,
        "channel": ch.to_dict(),
        "audit": {"claimed": list(report.claimed), "achievable": list(report.achievable),
                  "flags": report.flags},
        "trace": trace.to_dict(),
    }


def format_csv(rows, columns, cfg=None, comments=()):
    """CSV text with the config (and any extra notes) as leading ``#`` lines."""
    buf = io.StringIO()
    if cfg is not None:
        buf.write(f"# config: {json.dumps(cfg.to_dict(), sort_keys=True)}\n")
    for line in comments:
        buf.write(f"# {line}\n")
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (repr(float(v)) if isinstance(v, (float, np.floating)) else v)
                         for k, v in row.items()})
    return buf.getvalue()


def read_csv(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))
