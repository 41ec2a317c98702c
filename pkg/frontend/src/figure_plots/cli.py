"""Command-line entry point: read a directory of study CSVs, write images.

Usage:
    plot_figures --csv-dir <dir> --out-dir <dir> [--format png|svg] [--log-y]

Exits nonzero when no figure could be rendered or any input is empty or
malformed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import EmptyInput, MissingColumn, discover_figures, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot_figures",
        description="Render the smoother-study figures from their CSV tables.",
    )
    parser.add_argument("--csv-dir", required=True, help="directory holding the study CSVs")
    parser.add_argument("--out-dir", required=True, help="directory for the images")
    parser.add_argument("--format", choices=["png", "svg"], default="png")
    parser.add_argument("--log-y", action="store_true", help="logarithmic error axis")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    specs = discover_figures(args.csv_dir, out_dir, fmt=args.format)
    if not specs:
        print(f"plot_figures: no study CSVs found in {args.csv_dir}", file=sys.stderr)
        return 1
    failures = 0
    for spec in specs:
        try:
            path = render(spec, log_y=args.log_y)
        except (EmptyInput, MissingColumn) as exc:
            print(f"plot_figures: {spec.experiment}: {exc}", file=sys.stderr)
            failures += 1
        else:
            print(f"{spec.experiment}: wrote {path}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
