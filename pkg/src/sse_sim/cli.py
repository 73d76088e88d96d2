"""Command-line interface.

Subcommands: `bounds` (analytic curves), `simulate` (Monte Carlo vs analytic
targets), `concentration` (bin-count deviation rates and the max-reads
tail). Configuration comes from defaults, then an optional JSON config
file, then an optional preset, then explicit flags, in that order. Seeds
are always explicit; no environment variables are consulted.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields
from typing import Optional, Sequence

from .harness import (
    BOUNDS_COLUMNS,
    CONCENTRATION_COLUMNS,
    SIMULATION_COLUMNS,
    ConfigError,
    SweepConfig,
    fig2_preset,
    run_bounds_sweep,
    run_concentration_check,
    run_simulation_sweep,
    write_csv,
)

_CONFIG_KEYS = {f.name for f in fields(SweepConfig)}


def _parse_alpha(text: str):
    if text == "auto":
        return text
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("alpha must be a number or 'auto'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sse-sim",
        description="Simulate the shotgun sequencing channel with erasures "
                    "and evaluate its capacity bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file; flags override it")
    common.add_argument("--preset", choices=["fig2"],
                        help="named parameter preset (applied before flags)")
    common.add_argument("--n", type=int, action="append",
                        help="input length; repeat for a grid")
    common.add_argument("--c", type=float, action="append", dest="c",
                        help="coverage depth; repeat for a grid")
    common.add_argument("--c-min", type=float)
    common.add_argument("--c-max", type=float)
    common.add_argument("--c-steps", type=int)
    common.add_argument("--delta", type=float, action="append",
                        help="erasure probability; repeat for a grid")
    common.add_argument("--lbar", type=float, help="normalized read length")
    common.add_argument("--trials", type=int)
    common.add_argument("--seed", type=int, help="master seed (64-bit)")
    common.add_argument("--lprime", type=int, help="length-partition resolution")
    common.add_argument("--jmax", type=int, help="number of partition bins")
    common.add_argument("--alpha", type=_parse_alpha,
                        help="max-reads tail exponent, or 'auto'")
    common.add_argument("--merge-mode", choices=["maximal-run", "strict-overlap"])
    common.add_argument("--workers", type=int, help="worker processes for trials")
    common.add_argument("--out", help="output CSV path (default: stdout)")

    sub.add_parser("bounds", parents=[common],
                   help="write the analytic bound curves")
    sub.add_parser("simulate", parents=[common],
                   help="run Monte Carlo trials and compare to analytic targets")
    sub.add_parser("concentration", parents=[common],
                   help="measure bin-count concentration and the max-reads tail")
    return parser


def _load_config_file(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return data


def _c_grid(args) -> Optional[list[float]]:
    if args.c:
        return list(args.c)
    if args.c_min is None and args.c_max is None and args.c_steps is None:
        return None
    if args.c_min is None or args.c_max is None:
        raise ConfigError("--c-min and --c-max must be given together")
    steps = args.c_steps if args.c_steps is not None else 2
    if steps < 1:
        raise ConfigError("--c-steps must be at least 1")
    if steps == 1:
        return [args.c_min]
    width = (args.c_max - args.c_min) / (steps - 1)
    return [args.c_min + i * width for i in range(steps)]


def config_from_args(args) -> SweepConfig:
    config = SweepConfig()
    if args.config:
        for key, value in _load_config_file(args.config).items():
            setattr(config, key, value)
    if args.preset == "fig2":
        config = fig2_preset(config)

    if args.n:
        config.n_values = list(args.n)
    c_grid = _c_grid(args)
    if c_grid is not None:
        config.c_values = c_grid
    if args.delta:
        config.delta_values = list(args.delta)
    if args.lbar is not None:
        config.lbar = args.lbar
    if args.trials is not None:
        config.trials = args.trials
    if args.seed is not None:
        config.master_seed = args.seed
    if args.lprime is not None:
        config.l_prime = args.lprime
    if args.jmax is not None:
        config.j_max = args.jmax
    if args.alpha is not None:
        config.alpha = args.alpha
    if args.merge_mode is not None:
        config.merge_mode = args.merge_mode
    if args.workers is not None:
        config.workers = args.workers
    if args.out is not None:
        config.output_path = args.out
    return config


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        if args.command == "bounds":
            rows, columns = run_bounds_sweep(config), BOUNDS_COLUMNS
        elif args.command == "simulate":
            rows, columns = run_simulation_sweep(config), SIMULATION_COLUMNS
        else:
            rows, columns = run_concentration_check(config), CONCENTRATION_COLUMNS
        write_csv(columns, rows, config.output_path)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
