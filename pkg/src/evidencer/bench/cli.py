"""Command line entry point: ``evidencer run`` and ``evidencer timing``."""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

from ..models import MODEL_IDS, DatasetError, get_model
from .config import ConfigError, load_config_file, merge, parse_rungs
from .experiment import format_summary, run_experiment
from .io import write_bundle
from .timing import scheme_configs, timing_probe

log = logging.getLogger("evidencer")

REFERENCE_RATIOS = {"pf/standard": 1.0000, "pf/modified": 1.0083,
                    "adaptive/standard": 1.0076, "adaptive/modified": 1.0121}


def _add_run_parser(sub) -> None:
    p = sub.add_parser("run", help="replicate an evidence estimation experiment",
                       argument_default=argparse.SUPPRESS,
                       description="Replicate the pipeline and report bias, SE and RMSE per estimator. "
                                   "Settings come from defaults, then --config, then explicit flags.")
    p.add_argument("--config", help="JSON file of settings (flags override it)")
    p.add_argument("--model", help=f"one of {', '.join(MODEL_IDS)}")
    p.add_argument("--schedule", help="pf (powered fraction) or adaptive")
    p.add_argument("--pf-power", dest="pf_power", type=float, help="exponent c of the (i/n)^c ladder (default 5)")
    p.add_argument("--rungs", type=parse_rungs, help="rung count(s) n, e.g. 10,20,50")
    p.add_argument("--iters", type=int, help="iterations per rung including burn-in (default 10000)")
    p.add_argument("--burn", type=float, help="burn-in fraction (default 0.2)")
    p.add_argument("--reps", type=int, help="replicates per rung count (default 100)")
    p.add_argument("--estimators", help="standard, modified, ss or all; comma-separated (default all)")
    p.add_argument("--seed", type=int, help="master seed, unsigned 64-bit (default 1)")
    p.add_argument("--out", help="directory for the output bundle")
    p.add_argument("--format", help="csv or json (default csv)")
    p.add_argument("--truth", type=float, help="override the reference log evidence")
    p.add_argument("--recompute-truth", dest="recompute_truth", action="store_true",
                   help="recompute the truth with a long run (slow)")
    p.add_argument("--truth-rungs", dest="truth_rungs", type=int, help="rungs of the long run (default 2000)")
    p.add_argument("--truth-iters", dest="truth_iters", type=int,
                   help="iterations per rung of the long run (default 20000)")
    p.add_argument("--workers", type=int, help="worker processes for replicates (default 1)")
    p.add_argument("--all-curves", dest="all_curves", action="store_true",
                   help="write curves for every replicate, not just the first")


def _add_timing_parser(sub) -> None:
    p = sub.add_parser("timing", help="relative runtime of the four schemes")
    p.add_argument("--model", default="radiata1", choices=MODEL_IDS)
    p.add_argument("--rungs", type=int, default=100)
    p.add_argument("--iters", type=int, default=10000)
    p.add_argument("--burn", type=float, default=0.2)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="evidencer", description="Power posterior evidence estimation.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_run_parser(sub)
    _add_timing_parser(sub)
    return parser


def cmd_run(args: argparse.Namespace) -> int:
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "verbose", "config")}
    file_values = load_config_file(args.config) if getattr(args, "config", None) else {}
    cfg = merge(file_values, flags)
    bundle = run_experiment(cfg)
    print(format_summary(bundle.summary))
    if cfg.out:
        for path in write_bundle(bundle, cfg.out, cfg.format):
            print(f"wrote {path}")
    return 0


def cmd_timing(args: argparse.Namespace) -> int:
    if args.rungs < 1 or args.iters < 1 or args.repeats < 1:
        raise ConfigError("rungs/iters/repeats", "must be positive")
    ratios = timing_probe(get_model(args.model), scheme_configs(args.rungs, args.iters, args.burn),
                          repeats=args.repeats, seed=args.seed)
    print(f"{'scheme':<18} {'ratio':>8} {'reference':>10}")
    for name, r in ratios.items():
        print(f"{name:<18} {r:>8.4f} {REFERENCE_RATIOS[name]:>10.4f}")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return cmd_run(args) if args.command == "run" else cmd_timing(args)
    except (ConfigError, DatasetError) as exc:
        print(f"evidencer: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"evidencer: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
