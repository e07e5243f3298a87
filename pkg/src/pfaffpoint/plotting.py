"""Optional figure rendering for CLI outputs.

Figures are a convenience companion to the delimited outputs, never a
primary artifact: every figure is rendered from the same rows that go into
the CSV/JSON files.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["plot_kernel_rows", "plot_corr_rows", "plot_density_report"]


def plot_kernel_rows(rows: list[dict], path: str) -> None:
    """Scatter the S entry magnitude against the first point's position."""
    xs = [r["g1_re"] for r in rows]
    svals = [abs(complex(r["S_re"], r["S_im"])) for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(xs, svals, "o", ms=3)
    ax.set_xlabel("Re g1")
    ax.set_ylabel("|S|")
    ax.set_title("kernel S entry")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_corr_rows(rows: list[dict], path: str) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(range(len(rows)), [r["R"] for r in rows], "o-", ms=3)
    ax.set_xlabel("configuration index")
    ax.set_ylabel("R")
    ax.set_title("correlation values")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_density_report(centers, observed, predicted, n_samples, path: str) -> None:
    """Observed histogram with the predicted per-bin counts overlaid."""
    centers = np.asarray(centers)
    fig, ax = plt.subplots(figsize=(6, 4))
    width = centers[1] - centers[0] if len(centers) > 1 else 1.0
    ax.bar(centers, np.asarray(observed) / n_samples, width=width * 0.9,
           alpha=0.6, label="observed")
    ax.plot(centers, np.asarray(predicted) / n_samples, "r-", label="predicted")
    ax.set_xlabel("x")
    ax.set_ylabel("per-sample count")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
