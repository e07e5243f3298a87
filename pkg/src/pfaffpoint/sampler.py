"""Monte Carlo oracle: sample real Gaussian matrices and compare spectra
against the kernel predictions.

Eigenvalues come from the real Schur form; real/complex classification is by
Schur block structure (1x1 vs 2x2 diagonal blocks), never by thresholding
imaginary parts, so the real-eigenvalue count is exact for each sample.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg, stats

__all__ = [
    "EigenSample",
    "DensityEstimate",
    "ComparisonReport",
    "sample_ginoe",
    "estimate_density",
    "compare",
]

# worker/sample seed stride; any large odd constant works, fixed for
# reproducibility across worker counts
_SEED_STRIDE = 2654435761
_SEED_MOD = 2**63


def _derived_seed(seed: int, index: int) -> int:
    return (int(seed) + index * _SEED_STRIDE) % _SEED_MOD


@dataclass(frozen=True)
class EigenSample:
    """Classified spectrum of one sampled matrix."""

    n: int
    reals: np.ndarray
    pairs: np.ndarray  # upper-half representatives
    trace_residual: float

    def __post_init__(self):
        if len(self.reals) + 2 * len(self.pairs) != self.n:
            raise ValueError("real + 2*pair count must equal the matrix size")


def sample_ginoe(n: int, seed: int) -> EigenSample:
    """One draw: n x n iid standard normal matrix, spectrum via real Schur.

    The generator is numpy's default PCG64 seeded with the given integer;
    this choice is fixed for reproducibility.
    """
    if n % 2 != 0 or n < 2 or n > 64:
        raise ValueError(f"matrix size must be even, 2 <= n <= 64, got {n}")
    rng = np.random.default_rng(seed)
    y = rng.standard_normal((n, n))
    t, _ = linalg.schur(y, output="real")
    reals, pairs = [], []
    i = 0
    while i < n:
        if i == n - 1 or t[i + 1, i] == 0.0:
            reals.append(t[i, i])
            i += 1
        else:
            a, b = t[i, i], t[i, i + 1]
            c, d = t[i + 1, i], t[i + 1, i + 1]
            half_diff = 0.5 * (a - d)
            disc = half_diff * half_diff + b * c
            if disc >= 0.0:
                # a 2x2 block with real eigenvalues; LAPACK standardizes
                # these away, but split defensively rather than misclassify
                root = math.sqrt(disc)
                reals.extend([0.5 * (a + d) + root, 0.5 * (a + d) - root])
            else:
                pairs.append(complex(0.5 * (a + d), math.sqrt(-disc)))
            i += 2
    reals_arr = np.array(sorted(reals), dtype=float)
    pairs_arr = np.array(sorted(pairs, key=lambda z: (z.real, z.imag)), dtype=complex)
    resid = abs(np.sum(reals_arr) + 2.0 * np.sum(pairs_arr.real) - np.trace(y))
    return EigenSample(n=n, reals=reals_arr, pairs=pairs_arr, trace_residual=float(resid))


@dataclass(frozen=True)
class DensityEstimate:
    """Histogram estimates of the one-point intensities.

    real_density estimates the real-axis intensity; complex_density the
    upper-half-plane pair-representative intensity.  Both are per-sample
    averages divided by bin measure, so they target the one-point
    correlation functions directly.
    """

    n: int
    n_samples: int
    seed: int
    real_edges: np.ndarray
    real_counts: np.ndarray
    cplx_x_edges: np.ndarray
    cplx_y_edges: np.ndarray
    cplx_counts: np.ndarray
    real_count_per_sample: np.ndarray  # histogram over #real = 0..n

    @property
    def real_density(self) -> np.ndarray:
        widths = np.diff(self.real_edges)
        return self.real_counts / (self.n_samples * widths)

    @property
    def cplx_density(self) -> np.ndarray:
        areas = np.outer(np.diff(self.cplx_x_edges), np.diff(self.cplx_y_edges))
        return self.cplx_counts / (self.n_samples * areas)

    @property
    def real_count_mean(self) -> float:
        ks = np.arange(self.n + 1)
        return float(ks @ self.real_count_per_sample) / self.n_samples

    @property
    def real_count_se(self) -> float:
        ks = np.arange(self.n + 1)
        p = self.real_count_per_sample / self.n_samples
        var = float(ks * ks @ p) - (float(ks @ p)) ** 2
        return math.sqrt(var / self.n_samples)


def estimate_density(
    n: int,
    n_samples: int,
    seed: int,
    bins: int = 40,
    radius: float | None = None,
) -> DensityEstimate:
    """Accumulate spectra of n_samples independent draws into histograms.

    Sample k uses the derived seed (seed + k * stride) mod 2^63, so any
    partition of the index range across workers yields identical merged
    histograms.
    """
    if n_samples < 1:
        raise ValueError(f"need at least one sample, got {n_samples}")
    if radius is None:
        radius = math.sqrt(n) + 3.0
    real_edges = np.linspace(-radius, radius, bins + 1)
    x_edges = np.linspace(-radius, radius, bins + 1)
    y_edges = np.linspace(0.0, radius, max(bins // 2, 1) + 1)
    real_counts = np.zeros(bins)
    cplx_counts = np.zeros((bins, len(y_edges) - 1))
    count_hist = np.zeros(n + 1)
    for k in range(n_samples):
        s = sample_ginoe(n, _derived_seed(seed, k))
        real_counts += np.histogram(s.reals, bins=real_edges)[0]
        if len(s.pairs):
            cplx_counts += np.histogram2d(
                s.pairs.real, s.pairs.imag, bins=(x_edges, y_edges)
            )[0]
        count_hist[len(s.reals)] += 1
    return DensityEstimate(
        n=n,
        n_samples=n_samples,
        seed=int(seed),
        real_edges=real_edges,
        real_counts=real_counts,
        cplx_x_edges=x_edges,
        cplx_y_edges=y_edges,
        cplx_counts=cplx_counts,
        real_count_per_sample=count_hist,
    )


@dataclass(frozen=True)
class ComparisonReport:
    """Observed-vs-predicted summary for a density estimate."""

    n: int
    n_samples: int
    chi2: float
    dof: int
    p_value: float
    max_std_dev: float
    real_count_mean: float
    real_count_se: float
    predicted_real_count: float
    bin_centers: np.ndarray
    observed: np.ndarray
    predicted: np.ndarray
    std_devs: np.ndarray


def compare(
    est: DensityEstimate,
    real_intensity,
    predicted_real_count: float,
    min_expected: float = 10.0,
) -> ComparisonReport:
    """Compare the real-axis histogram against a predicted intensity.

    real_intensity(x) must be the one-point real density for the same n.
    Bins are aggregated per-bin with Poisson standard errors; bins whose
    expected count falls below min_expected are excluded from the chi^2
    (standard sparse-bin practice) but still reported.
    """
    centers = 0.5 * (est.real_edges[:-1] + est.real_edges[1:])
    widths = np.diff(est.real_edges)
    # midpoint rule is adequate at histogram resolution
    pred_counts = np.array(
        [real_intensity(x) for x in centers]
    ) * widths * est.n_samples
    obs = est.real_counts
    with np.errstate(divide="ignore", invalid="ignore"):
        std = np.where(pred_counts > 0, (obs - pred_counts) / np.sqrt(pred_counts), 0.0)
    mask = pred_counts >= min_expected
    chi2 = float(np.sum(std[mask] ** 2))
    dof = int(np.sum(mask))
    p = float(stats.chi2.sf(chi2, dof)) if dof > 0 else float("nan")
    return ComparisonReport(
        n=est.n,
        n_samples=est.n_samples,
        chi2=chi2,
        dof=dof,
        p_value=p,
        max_std_dev=float(np.max(np.abs(std[mask]))) if dof else float("nan"),
        real_count_mean=est.real_count_mean,
        real_count_se=est.real_count_se,
        predicted_real_count=float(predicted_real_count),
        bin_centers=centers,
        observed=obs,
        predicted=pred_counts,
        std_devs=std,
    )
