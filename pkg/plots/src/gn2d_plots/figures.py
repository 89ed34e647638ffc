"""Figure generation from simulator outputs: field heatmaps and log-log
scaling lines."""

from __future__ import annotations

import csv
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .snapshot import FIELD_INDEX, centered_curl, read_snapshot


def fit_loglog_slope(xs, ys) -> float:
    """Ordinary least squares slope on (log x, log y).

    The simulator CLI fits its reported slopes with this exact formula, so
    the two components must agree to round-off on a shared CSV.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.size < 2:
        raise ValueError("slope fit needs at least two points")
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def plot_field(snapshot_path, field_name: str, out_path=None,
               lx: float = 2 * np.pi, ly: float = 2 * np.pi) -> str:
    """Render one plane of a snapshot as a heatmap; `curl` is derived from
    the velocity planes by centered differences."""
    snap = read_snapshot(snapshot_path)
    if field_name == "curl":
        if snap.nfields < 3:
            raise ValueError("curl plot needs both velocity planes")
        dx, dy = lx / snap.nx, ly / snap.ny
        data = centered_curl(snap.planes[1], snap.planes[2], dx, dy)
    else:
        try:
            data = snap.planes[FIELD_INDEX[field_name]]
        except KeyError:
            raise ValueError(f"unknown field {field_name!r}; "
                             f"choose from zeta, v1, v2, curl") from None
    if out_path is None:
        base, _ = os.path.splitext(str(snapshot_path))
        out_path = f"{base}_{field_name}.png"
    fig, ax = plt.subplots(figsize=(5.2, 4.4))
    # planes are indexed (x, y); show x horizontal
    im = ax.imshow(data.T, origin="lower", extent=(0, lx, 0, ly),
                   cmap="RdBu_r", interpolation="nearest")
    fig.colorbar(im, ax=ax)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(f"{field_name} at t = {snap.t:.4g}")
    fig.tight_layout()
    fig.savefig(out_path, dpi=130)
    plt.close(fig)
    return str(out_path)


def read_sweep_csv(path, x_col: str, y_col: str):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ValueError(f"{path}: empty CSV")
    for col in (x_col, y_col):
        if col not in rows[0]:
            raise ValueError(f"{path}: no column {col!r}; "
                             f"have {sorted(rows[0])}")
    xs = [float(r[x_col]) for r in rows]
    ys = [float(r[y_col]) for r in rows]
    return xs, ys


def plot_scaling(sweep_csv, x_col: str, y_col: str, out_path=None) -> tuple[str, float]:
    """Log-log scatter of y_col vs x_col with a least-squares line; returns
    (image path, fitted slope)."""
    xs, ys = read_sweep_csv(sweep_csv, x_col, y_col)
    slope = fit_loglog_slope(xs, ys)
    lx, ly = np.log(xs), np.log(ys)
    intercept = ly.mean() - slope * lx.mean()
    if out_path is None:
        base, _ = os.path.splitext(str(sweep_csv))
        out_path = f"{base}_scaling.png"
    fig, ax = plt.subplots(figsize=(5.2, 4.2))
    ax.loglog(xs, ys, "o", label="data")
    xs_line = np.linspace(min(lx), max(lx), 64)
    ax.loglog(np.exp(xs_line), np.exp(slope * xs_line + intercept), "-",
              label=f"slope {slope:.3f}")
    ax.set_xlabel(x_col)
    ax.set_ylabel(y_col)
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path, dpi=130)
    plt.close(fig)
    return str(out_path), slope
