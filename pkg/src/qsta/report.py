"""Figure rendering for sweep and calibration outputs.

Renders alongside the delimited output, one PNG per detuning (sweeps)
or per drive amplitude (calibration), plus summary panels.  Figures are
derived views of the CSV/JSON data; the files remain the authority.
"""

from __future__ import annotations

import math
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def sweep_figures(rows: list[dict], out_dir, prefix: str = "sweep") -> list[Path]:
    """One probability-vs-duration panel per (family, detuning) group."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    groups = defaultdict(list)
    for row in rows:
        groups[(row["family"], row["detuning_rad_s"])].append(row)

    paths = []
    for (family, detuning), grp in sorted(groups.items()):
        by_tau = defaultdict(list)
        for row in grp:
            by_tau[row["tau_samples"]].append(row)
        taus = sorted(by_tau)
        fig, ax = plt.subplots(figsize=(6.4, 4.2))
        for tau in taus:
            reps = [r["p0"] for r in by_tau[tau]]
            ax.plot([tau] * len(reps), reps, "o", color="tab:red", ms=3, alpha=0.4,
                    zorder=2)
        means = [float(np.mean([r["p0"] for r in by_tau[tau]])) for tau in taus]
        exact = [by_tau[tau][0]["p0_exact"] for tau in taus]
        adiab = [by_tau[tau][0]["p0_adiabatic"] for tau in taus]
        ax.plot(taus, means, "ko", ms=5, label="mean of repeats", zorder=3)
        ax.plot(taus, exact, "-", color="tab:blue", label="simulated (noise-free)")
        ax.plot(taus, adiab, "--", color="tab:gray", label="adiabatic reference")
        ax.set_xlabel("drive duration (samples)")
        ax.set_ylabel(r"$P(|0\rangle)$")
        ax.set_title(f"{family} drive, $\\Delta/2\\pi$ = {detuning / (2 * math.pi) / 1e6:.2f} MHz"
                     f"  ($\\Delta$ = {detuning:.3g} rad/s)")
        ax.legend(loc="best", fontsize=8)
        ax.grid(alpha=0.3)
        fig.tight_layout()
        path = out_dir / f"{prefix}_{family}_delta_{detuning:.3e}.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        paths.append(path)
    return paths


def calibration_figures(report: dict, out_dir, prefix: str = "calibrate") -> list[Path]:
    """Per-amplitude Rabi panels plus the line-fit selection panel."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []

    for entry in report["per_amplitude"]:
        d = entry["d"]
        t = np.array(entry["durations_s"])
        y = np.array(entry["mean_p0"])
        fig, ax = plt.subplots(figsize=(6.4, 4.0))
        ax.plot(t * 1e9, y, "ko", ms=4, label="measured mean")
        t_fine = np.linspace(t[0], t[-1], 400)
        fit = entry["fit"]
        model = fit["offset"] + fit["amplitude"] * np.cos(
            2 * math.pi * t_fine / fit["period_s"] + fit["phase_rad"]
        )
        ax.plot(t_fine * 1e9, model, "-", color="tab:blue",
                label=f"cosine fit, T = {fit['period_s'] * 1e9:.2f} ns")
        ax.set_xlabel("drive duration (ns)")
        ax.set_ylabel(r"$P(|0\rangle)$")
        ax.set_title(f"resonant constant drive, d = {d:g} "
                     f"($\\Omega_c$ = {entry['omega_c_rad_s']:.4g} rad/s)")
        ax.legend(loc="best", fontsize=8)
        ax.grid(alpha=0.3)
        fig.tight_layout()
        path = out_dir / f"{prefix}_rabi_d{d:g}.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        paths.append(path)

    d_vals = np.array([e["d"] for e in report["per_amplitude"]])
    omegas = np.array([e["omega_c_rad_s"] for e in report["per_amplitude"]])
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot(d_vals, omegas / 1e6, "ko", ms=5, label="per-amplitude estimate")
    line = report.get("line_fit")
    if line is not None:
        d_fine = np.linspace(0, 1, 100)
        ax.plot(d_fine, (line["slope"] * d_fine + line["intercept"]) / 1e6,
                "-", color="tab:blue", label="least-squares line")
        ax.plot([0.5], [report["omega_c_selected_rad_s"] / 1e6], "D",
                color="tab:red", ms=8, label="selected (mean over [0, 1])")
    ax.set_xlabel("constant drive amplitude d")
    ax.set_ylabel(r"$\Omega_c$ ($10^6$ rad/s)")
    ax.legend(loc="best", fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    path = out_dir / f"{prefix}_selection.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    paths.append(path)
    return paths
