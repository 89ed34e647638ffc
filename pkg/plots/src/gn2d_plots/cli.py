"""Script entry points: gn2d-plot-field and gn2d-plot-scaling."""

from __future__ import annotations

import argparse
import sys

from .figures import plot_field, plot_scaling
from .snapshot import SnapshotParseError


def main_field(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="gn2d-plot-field",
        description="Render a heatmap from a gn2d binary snapshot.")
    parser.add_argument("snapshot", help="snapshot .bin file")
    parser.add_argument("field", choices=["zeta", "v1", "v2", "curl"])
    parser.add_argument("--out", default=None, help="output PNG path")
    args = parser.parse_args(argv)
    try:
        out = plot_field(args.snapshot, args.field, args.out)
    except (SnapshotParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0


def main_scaling(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="gn2d-plot-scaling",
        description="Log-log scaling plot with a least-squares slope fit.")
    parser.add_argument("csv", help="sweep CSV file")
    parser.add_argument("x_col")
    parser.add_argument("y_col")
    parser.add_argument("--out", default=None, help="output PNG path")
    args = parser.parse_args(argv)
    try:
        out, slope = plot_scaling(args.csv, args.x_col, args.y_col, args.out)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"{out} slope={slope:.12g}")
    return 0
