"""Command-line entry point: run one experiment and write its CSV table.

Usage:
    rpsmooth <experiment-id> [--config PATH] [--out PATH.csv] [--mu F]
             [--grid N] [--combine matrix-first|scalar-first] [--loss F]
             [--seed U64] [--threads N]

Exit codes: 0 on success, 2 on a configuration problem, 3 when one or more
grid points failed numerically (the partial CSV is still written).
"""

from __future__ import annotations

import argparse
import sys

from .errors import ConfigError, RpsmoothError
from .experiments import EXPERIMENTS, load_config, run_sweep, spec_for


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rpsmooth",
        description="Error-versus-parameter studies for optimal and robust "
                    "fixed-interval phase smoothers.",
    )
    parser.add_argument("experiment", choices=sorted(EXPERIMENTS), help="experiment id")
    parser.add_argument("--config", help="flat key-value configuration file")
    parser.add_argument("--out", help="output CSV path (default: <experiment>.csv)")
    parser.add_argument("--mu", type=float, help="uncertainty level")
    parser.add_argument("--grid", type=int, help="number of grid points")
    parser.add_argument("--combine", choices=["matrix-first", "scalar-first"],
                        help="multivariate smoother-error reduction (default scalar-first)")
    parser.add_argument("--loss", type=float, help="squeezed-beam loss l_sq")
    parser.add_argument("--seed", type=int, help="simulation seed (mc-validate)")
    parser.add_argument("--threads", type=int, help="worker threads for grid points")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        overrides: dict = {}
        if args.config:
            overrides.update(load_config(args.config))
        for key in ("mu", "grid", "combine", "seed", "threads"):
            value = getattr(args, key)
            if value is not None:
                overrides[key] = value
        if args.loss is not None:
            overrides["l_sq"] = args.loss
        overrides["out"] = args.out or overrides.get("out") or f"{args.experiment}.csv"
        spec = spec_for(args.experiment, overrides)
    except (ConfigError, OSError) as exc:
        print(f"rpsmooth: config error: {exc}", file=sys.stderr)
        return 2

    try:
        table = run_sweep(spec)
    except RpsmoothError as exc:
        print(f"rpsmooth: {exc}", file=sys.stderr)
        return 3
    print(f"{spec.experiment}: wrote {len(table.rows)} rows to {spec.out}")
    if table.any_error:
        bad = sum(1 for r in table.rows if r["error"])
        print(f"rpsmooth: {bad} grid point(s) failed; see the error column", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
