#!/usr/bin/env python3
"""Curl-growth sweep: how the rotational part of the velocity scales with
the dispersion parameter.  Takes a few minutes at 128x128.

Usage: python3 scripts/run_curl_scaling.py [outdir]
"""

import pathlib
import subprocess
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "out/curl_scaling"
    cfg = ROOT / "configs" / "curl_scaling.ini"
    subprocess.run(["gn2d", "curl-scaling", "--config", str(cfg), "--out", out],
                   check=True)
    subprocess.run(["gn2d-plot-scaling", f"{out}/curl_scaling.csv",
                    "mu", "max_curl_hs"], check=True)


if __name__ == "__main__":
    main()
