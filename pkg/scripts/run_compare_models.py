#!/usr/bin/env python3
"""Paired-model sweep: trajectory difference between the curl-augmented and
standard systems as the dispersion parameter shrinks.

Usage: python3 scripts/run_compare_models.py [outdir]
"""

import pathlib
import subprocess
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "out/compare_models"
    cfg = ROOT / "configs" / "compare_models.ini"
    subprocess.run(["gn2d", "compare-models", "--config", str(cfg), "--out", out],
                   check=True)
    subprocess.run(["gn2d-plot-scaling", f"{out}/model_difference.csv",
                    "mu", "x0_difference"], check=True)


if __name__ == "__main__":
    main()
