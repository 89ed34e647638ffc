#!/usr/bin/env python3
"""Run the gaussian hump demo scenario and render a few surface heatmaps.

Usage: python3 scripts/run_demo.py [outdir]
"""

import pathlib
import subprocess
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "out/gaussian_hump"
    cfg = ROOT / "configs" / "gaussian_hump.ini"
    subprocess.run(["gn2d", "run", "--config", str(cfg), "--out", out],
                   check=True)
    snaps = sorted(pathlib.Path(out).glob("snapshot_*.bin"))
    for snap in snaps:
        subprocess.run(["gn2d-plot-field", str(snap), "zeta"], check=True)
    print(f"wrote {len(snaps)} heatmaps under {out}")


if __name__ == "__main__":
    main()
