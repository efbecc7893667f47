#!/usr/bin/env python3
"""Quick-look plots for sweep CSVs produced by `rislink sweep ...`.

Usage: plot_sweeps.py RESULTS_DIR [OUT_DIR]

Renders whatever result files it recognizes; rendering is a convenience,
not part of the validated surface.
"""
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def save(fig, out_dir, name):
    path = out_dir / f"{name}.png"
    fig.tight_layout()
    fig.savefig(path, dpi=140)
    plt.close(fig)
    print(f"wrote {path}")


def plot_nmse_vs_m(df, out_dir):
    fig, ax = plt.subplots()
    ax.errorbar(df["M"], df["mean_nmse"], yerr=df["stderr"], marker="o")
    ax.set_xlabel("pilot length M")
    ax.set_ylabel("NMSE")
    ax.set_xscale("log", base=2)
    ax.set_yscale("log")
    ax.grid(True, which="both", alpha=0.3)
    save(fig, out_dir, "nmse_vs_M")


def plot_nmse_vs_snr(df, out_dir):
    fig, ax = plt.subplots()
    ax.errorbar(df["gamma_db"], df["mean_nmse"], yerr=df["stderr"], marker="o")
    ax.set_xlabel("pilot SNR (dB)")
    ax.set_ylabel("NMSE")
    ax.set_yscale("log")
    ax.grid(True, which="both", alpha=0.3)
    save(fig, out_dir, "nmse_vs_snr")


def plot_effsnr(df, out_dir):
    fig, ax = plt.subplots()
    ax.errorbar(df["epsilon"], df["mean_ratio"], yerr=df["stderr"], marker="o", label="measured")
    ax.plot(df["epsilon"], 1.0 - df["epsilon"], "--", label="1 - eps")
    ax.set_xlabel("estimation NMSE eps")
    ax.set_ylabel("effective SNR ratio")
    ax.legend()
    ax.grid(True, alpha=0.3)
    save(fig, out_dir, "effsnr_vs_nmse")


def plot_pilot_bound(df, out_dir, name):
    fig, ax = plt.subplots()
    xcol = "lambda_nm" if "lambda_nm" in df.columns else "pixel_mm"
    group = "pixel_mm" if xcol == "lambda_nm" else "N"
    for key, sub in df.groupby(group):
        ax.plot(sub[xcol], sub["m_required"], marker="o", label=f"{group}={key:g}")
    ax.set_xlabel(xcol)
    ax.set_ylabel("required pilot length M")
    ax.set_yscale("log")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    save(fig, out_dir, name)


def plot_complexity(df, out_dir):
    fig, ax = plt.subplots()
    ax.plot(df["N"], df["unitary_macs"], marker="o", label="unitary pilots")
    ax.plot(df["N"], df["general_macs"], marker="s", label="general pilots")
    ax.set_xlabel("array size N")
    ax.set_ylabel("complex MACs per frame")
    ax.set_xscale("log", base=2)
    ax.set_yscale("log")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    save(fig, out_dir, "complexity")


def plot_cs_feedback(df, out_dir):
    fig, ax = plt.subplots()
    ax.bar(df["payload_bits"], df["mean_nmse"],
           width=0.15 * df["payload_bits"],
           tick_label=[f"K/N={k:g}" for k in df["k_over_n"]])
    ax.set_xlabel("feedback payload (bits)")
    ax.set_ylabel("NMSE after reconstruction")
    ax.set_yscale("log")
    ax.grid(True, axis="y", alpha=0.3)
    save(fig, out_dir, "cs_feedback")


def plot_maps(df, out_dir):
    n = int(round(len(df) ** 0.5))
    fig, axes = plt.subplots(1, 3, figsize=(13, 4))
    for ax, col, title in zip(axes, ["ideal_gain", "long_exposure_gain", "deviation"],
                              ["ideal", "long exposure", "deviation"]):
        z = df[col].to_numpy().reshape(n, n)
        im = ax.imshow(z, origin="lower",
                       extent=[df["mu_x"].min(), df["mu_x"].max(),
                               df["mu_y"].min(), df["mu_y"].max()])
        ax.set_title(title)
        ax.set_xlabel("mu_x")
        fig.colorbar(im, ax=ax, shrink=0.8)
    save(fig, out_dir, "pixel_gain_maps")


HANDLERS = {
    "nmse_vs_M": plot_nmse_vs_m,
    "nmse_vs_snr": plot_nmse_vs_snr,
    "effsnr_vs_nmse": plot_effsnr,
    "complexity": plot_complexity,
    "cs_feedback": plot_cs_feedback,
    "pixel_gain_maps": plot_maps,
}


def main():
    if len(sys.argv) < 2:
        print(__doc__)
        return 2
    results = Path(sys.argv[1])
    out_dir = Path(sys.argv[2]) if len(sys.argv) > 2 else results
    out_dir.mkdir(parents=True, exist_ok=True)
    found = 0
    for csv in sorted(results.glob("*.csv")):
        df = pd.read_csv(csv)
        if csv.stem in HANDLERS:
            HANDLERS[csv.stem](df, out_dir)
            found += 1
        elif csv.stem in ("pilot_vs_wavelength", "pilot_vs_area"):
            plot_pilot_bound(df, out_dir, csv.stem)
            found += 1
    if not found:
        print(f"no recognized sweep CSVs under {results}")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
