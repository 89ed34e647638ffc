#!/usr/bin/env python3
"""Temporal (Richardson) and spatial (grid-doubling) convergence studies.

Usage: python3 scripts/run_convergence.py [outdir]
"""

import pathlib
import subprocess
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "out/convergence"
    cfg = ROOT / "configs" / "convergence.ini"
    subprocess.run(["gn2d", "convergence", "--config", str(cfg), "--out", out],
                   check=True)


if __name__ == "__main__":
    main()
