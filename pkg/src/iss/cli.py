"""Command line driver.

    iss sweep     --config cfg.json --out sweep.csv [--jobs 4]
    iss snapshot  --config cfg.json --out spectra.csv
    iss cognitive --config cfg.json --out cr.csv
    iss run       --config cfg.json --out trace.json [--algorithm ISS-CJE]

Without ``--config`` each command runs its default experiment.
"""

import argparse
import json
import logging
import sys

from . import experiments as ex
from .numerics import IssError

DEFAULTS = {
    "sweep": {"budgets": [100.0, 100.0]},
    "snapshot": {"budgets": [100.0, 100.0], "rho_list": [10.0], "realizations": 1},
    "cognitive": {"budgets": [100.0, 1.0], "algorithms": ["IWF", "ISS-CJE"]},
    "run": {"budgets": [100.0, 100.0], "rho_list": [10.0], "realizations": 1},
}


def load_config(command, path=None, seed=None):
    d = dict(DEFAULTS[command])
    if path:
        with open(path) as fh:
            d.update(json.load(fh))
    if seed is not None:
        d["seed"] = seed
    return ex.ExperimentConfig.from_dict(d)


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def main(argv=None):
    parser = argparse.ArgumentParser(prog="iss", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [("sweep", "average sum rate versus cross-channel power"),
                        ("snapshot", "converged power spectra on one realization"),
                        ("cognitive", "primary IWF user against an IWF or ISS secondary user"),
                        ("run", "full convergence trace of one realization as JSON")]:
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", metavar="PATH", help="JSON experiment config")
        p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--jobs", type=int, default=1, help="worker processes")
        if name == "run":
            p.add_argument("--algorithm", choices=list(ex.ALGORITHMS))
    parser.add_argument("-v", "--verbose", action="store_true")
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)

    try:
        cfg = load_config(args.command, args.config, args.seed)
        if args.command == "sweep":
            text = ex.format_csv(ex.cmd_sweep(cfg, args.jobs), ex.SWEEP_COLUMNS, cfg)
        elif args.command == "snapshot":
            rows, summary = ex.cmd_snapshot(cfg)
            notes = [f"summary {name}: {json.dumps(s, sort_keys=True)}" for name, s in summary.items()]
            text = ex.format_csv(rows, ex.SNAPSHOT_COLUMNS, cfg, notes)
        elif args.command == "cognitive":
            text = ex.format_csv(ex.cmd_cognitive(cfg, args.jobs), ex.COGNITIVE_COLUMNS, cfg)
        else:
            text = json.dumps(ex.cmd_run(cfg, args.algorithm), indent=1) + "\n"
    except (IssError, ValueError, OSError) as err:
        print(f"iss {args.command}: {err}", file=sys.stderr)
        return 2
    _emit(text, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
