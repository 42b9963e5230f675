"""Command-line front end.

    ccasim run <config.yaml> [--seed N] [--trajectories N] [--out PATH]
                             [--format csv|json]
    ccasim defaults <experiment> [--out PATH]
    ccasim validate <config.yaml>

Exit codes: 0 success, 2 config error, 3 runtime failure.  The environment
variable CCASIM_OUTDIR overrides the output directory of every written file.
"""

import argparse
import json
import sys

from .config import EXPERIMENTS, ConfigError, load_config, validate_config
from .defaults import defaults_yaml
from .runner import run_experiment

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def build_parser():
    ap = argparse.ArgumentParser(
        prog="ccasim",
        description="Coupled-cavity array simulations: full atom-cavity "
                    "models, their effective lattice models, and the "
                    "experiments comparing the two.")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the experiment described by a config")
    run.add_argument("config", help="YAML config file")
    run.add_argument("--seed", type=int, default=None,
                     help="override numerics.seed")
    run.add_argument("--trajectories", type=int, default=None,
                     help="override numerics.n_trajectories")
    run.add_argument("--out", default=None,
                     help="output file path (stem is reused for the summary)")
    run.add_argument("--format", choices=("csv", "json"), default=None,
                     help="time-series format (default from the config)")

    dfl = sub.add_parser("defaults",
                         help="print a complete default config")
    dfl.add_argument("experiment", choices=EXPERIMENTS)
    dfl.add_argument("--out", default=None,
                     help="write the config here instead of stdout")

    val = sub.add_parser("validate", help="check a config and report issues")
    val.add_argument("config", help="YAML config file")
    return ap


def _cmd_run(args):
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg.numerics["seed"] = args.seed
    if args.trajectories is not None:
        cfg.numerics["n_trajectories"] = args.trajectories
    if args.format is not None:
        cfg.output["format"] = args.format
    summary = run_experiment(cfg, out_path=args.out)
    for w in summary.get("warnings", []):
        print(w, file=sys.stderr)
    files = summary.get("files", {})
    for kind, path in files.items():
        print(f"{kind}: {path}")
    print(f"done in {summary['wall_time_s']:.2f} s")
    return EXIT_OK


def _cmd_defaults(args):
    text = defaults_yaml(args.experiment)
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_validate(args):
    cfg = load_config(args.config)
    issues = validate_config(cfg)
    for issue in issues:
        print(issue)
    errors = [i for i in issues if i.level == "error"]
    if errors:
        return EXIT_CONFIG
    print(f"ok: {cfg.experiment} config "
          f"({len(issues)} warning{'s' if len(issues) != 1 else ''})")
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "defaults":
            return _cmd_defaults(args)
        return _cmd_validate(args)
    except ConfigError as e:
        for issue in e.issues:
            print(issue, file=sys.stderr)
        return EXIT_CONFIG
    except Exception as e:  # noqa: BLE001 - runtime failures exit 3
        print(f"runtime failure: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
