"""Outlier noise models for embedded manifold data.

Each sample is independently marked an outlier with probability p_i and,
if marked, displaced by an isotropic Gaussian z_i ~ N(0, (sigma_i^2/m) I_m)
in the ambient R^m, so ||z_i|| concentrates near sigma_i regardless of m.
Three regimes:

* SIMPLE          : p_i = p_out, sigma_i = sigma_out.
* HETEROSKEDASTIC : p_i = 0.05 + 0.9 ((1 - t_i + u_i) mod 1) with
  u_i ~ Unif(0,1), and sigma_i = sigma_out sqrt(gamma_i) with
  gamma_i = 0.9 gamma1(t_i) + 0.1 gamma2, gamma2 ~ Unif(0,3),
  gamma1(t) = 10^(1 - ((1 + sin 2 pi t)/2)^2): both the outlier rate and
  magnitude vary over the manifold.
* IID             : p_i = 0.95, gamma_i ~ Unif(0,3); nearly every point
  is perturbed.

Draw order is part of the reproducibility contract.  For each sample
i = 0..n-1, in order: the rate uniform u_i (heteroskedastic only), the
outlier coin, then only for outliers the gamma uniform(s) followed by
the m Gaussian components.  Gaussians come from the inverse CDF of
uniforms, so a (seed, order) pair pins every byte of the output.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._rng import make_rng, standard_normal
from .manifold import Dataset


class NoiseKind(Enum):
    SIMPLE = "simple"
    HETEROSKEDASTIC = "heteroskedastic"
    IID = "iid"


@dataclass
class NoiseModel:
    """Noise regime plus ambient dimension and scale knobs.

    p_out is only read by the SIMPLE regime.  m must be at least the
    clean embedding's width (>= 4).
    """

    kind: NoiseKind
    m: int
    sigma_out: float = 0.1
    p_out: float = 0.1

    def __post_init__(self):
        if self.m < 4:
            raise ValueError("m must be >= 4")
        if not 0.0 <= self.p_out < 1.0:
            raise ValueError("p_out must lie in [0, 1)")
        if self.sigma_out < 0:
            raise ValueError("sigma_out must be >= 0")


def _gamma1(t):
    return 10.0 ** (1.0 - ((1.0 + np.sin(2.0 * np.pi * t)) / 2.0) ** 2)


def add_noise(ds, model, seed):
    """Return a noisy copy of a clean dataset.

    The dataset's clean points must already live in R^m with
    m = model.m (see ``manifold.embed_ambient``).  Inlier rows of the
    result are bitwise equal to the clean rows.

    Draw order is part of the contract: for the heteroskedastic kind
    one phase u ~ Unif(0,1) is drawn first, making the outlier
    probability a randomly rotated sawtooth profile along the
    manifold; then per sample, in index order, the Bernoulli coin,
    the gamma component, and the noise vector.  The coherent
    high-outlier arc produced by the shared phase is what breaks the
    degree-normalized pipeline in the embedding experiment.
    """
    if ds.noisy_points is not None:
        raise ValueError("dataset already carries noise")
    clean = ds.clean_points
    n, m = clean.shape
    if m != model.m:
        raise ValueError(f"dataset is {m}-dimensional but the model wants m={model.m}")
    rng = make_rng(seed)
    noisy = clean.copy()
    flags = np.zeros(n, dtype=bool)
    root_m = np.sqrt(m)
    u = rng.random() if model.kind is NoiseKind.HETEROSKEDASTIC else 0.0
    for i in range(n):
        ti = ds.t[i]
        if model.kind is NoiseKind.HETEROSKEDASTIC:
            p_i = 0.05 + 0.9 * ((1.0 - ti + u) % 1.0)
        elif model.kind is NoiseKind.SIMPLE:
            p_i = model.p_out
        else:
            p_i = 0.95
        if rng.random() >= p_i:
            continue
        flags[i] = True
        if model.kind is NoiseKind.SIMPLE:
            gam = 1.0
        elif model.kind is NoiseKind.HETEROSKEDASTIC:
            gam = 0.9 * _gamma1(ti) + 0.1 * (3.0 * rng.random())
        else:
            gam = 3.0 * rng.random()
        sigma = model.sigma_out * np.sqrt(gam)
        noisy[i] += (sigma / root_m) * standard_normal(rng, m)
    return Dataset(
        t=ds.t,
        clean_points=clean,
        noisy_points=noisy,
        outlier_flags=flags,
        seed=ds.seed,
    )


def attenuation(ds, epsilon):
    """Per-sample kernel attenuation exp(-||xi_i||^2 / (4 epsilon)).

    xi_i is the sample's displacement off the manifold; the factor is
    how much every affinity touching i shrinks relative to the clean
    kernel (up to cross terms).
    """
    if ds.noisy_points is None:
        raise ValueError("needs a noisy dataset")
    xi = ds.noisy_points - ds.clean_points
    return np.exp(-np.einsum("ij,ij->i", xi, xi) / (4.0 * epsilon))


def cross_term_stats(ds):
    """Extremes of the distance cross term between clean and noise parts.

    Writing x_i = x_i^c + xi_i,

        ||x_i - x_j||^2 = ||x_i^c - x_j^c||^2 + ||xi_i||^2 + ||xi_j||^2
                          + r_ij,
        r_ij = 2 (x_i^c - x_j^c) . (xi_i - xi_j) - 2 xi_i . xi_j.

    r_ij is the only part of the noisy squared distance that is not a
    clean distance plus per-sample offsets; it shrinks like 1/sqrt(m)
    as the ambient dimension grows.  Returns the largest |r_ij| over
    off-diagonal pairs (the empirical cross-term bound) and the
    fraction of inlier samples.
    """
    if ds.noisy_points is None:
        raise ValueError("needs a noisy dataset")
    xc = ds.clean_points
    xi = ds.noisy_points - ds.clean_points
    cross = xc @ xi.T
    diag = np.einsum("ij,ij->i", xc, xi)
    gram = xi @ xi.T
    r = 2.0 * (diag[:, None] + diag[None, :] - cross - cross.T) - 2.0 * gram
    off = ~np.eye(ds.n, dtype=bool)
    max_abs = float(np.max(np.abs(r[off])))
    flags = ds.outlier_flags
    frac_inliers = 1.0 if flags is None else float(1.0 - flags.mean())
    return max_abs, frac_inliers
