"""Reproducible desk-scale experiment drivers.

Three experiments built from the library pieces:

* pointwise convergence: apply -(1/epsilon) L to the bundled test
  function on a sampled manifold and compare against the closed-form
  weighted Laplacian, in relative 2- and sup-norm;
* bandwidth sweeps: the same over an epsilon grid with replicated
  sampling, plus log-log slope fits on chosen grid branches;
* spectral embedding: lowest non-trivial eigenvector pairs of the
  random-walk Laplacians vs. the circle harmonics, scored after an
  optimal orthogonal alignment.

Replica r always uses dataset seed base_seed + r (shared across grid
points, so sweep curves see the same datasets) and noise seed
base_seed + r + NOISE_SEED_OFFSET, which keeps the two streams
disjoint for any desk-scale seed range.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.linalg import svd

from .csvio import fmt, write_rows
from .kernel import Convention, build_affinity
from .laplacian import (
    KIND_FORM,
    SK_KINDS,
    LaplacianForm,
    LaplacianKind,
    apply_rescaled,
    bistochastic_affinity,
    dm_affinity,
    laplacian_from_affinity,
    smallest_eigenpairs,
)
from .manifold import (
    Dataset,
    DensitySpec,
    delta_p_f,
    embed_ambient,
    sample_dataset,
    test_function,
)
from .noise import add_noise
from .sinkhorn import SkConfig, approx_sym_sk, to_normalized_convention

NOISE_SEED_OFFSET = 2**32

SWEEP_HEADER = (
    "epsilon",
    "relerr2_mean",
    "relerr2_std",
    "relerrinf_mean",
    "relerrinf_std",
    "mean_sk_iters",
    "replicas",
)

EMBEDDING_HEADER = ("method", "pair", "mse_mean", "mse_std", "replicas")


@dataclass
class PointwiseResult:
    """Relative errors of one pipeline run plus scaling diagnostics.

    sk_iters and projection_hits are 0 for the dm pipeline;
    min_inlier_eta is the smallest normalized-convention scaling entry
    over non-outlier samples (all samples when the data is clean), or
    None for the dm pipeline.
    """

    relerr2: float
    relerrinf: float
    sk_iters: int
    projection_hits: int = 0
    min_inlier_eta: float | None = None


@dataclass
class SweepRecord:
    epsilon: float
    relerr2_mean: float
    relerr2_std: float
    relerrinf_mean: float
    relerrinf_std: float
    mean_sk_iters: float
    replicas: int


@dataclass
class AlignmentResult:
    """Optimal scaled-orthogonal alignment of a 2-column frame.

    mse is the per-entry squared error of s V Q against the reference
    after minimizing over scale s and orthogonal Q (rotations and
    reflections).
    """

    mse: float
    scale: float
    rotation: np.ndarray


@dataclass
class EmbeddingRecord:
    method: str
    pair: int
    mse_mean: float
    mse_std: float
    replicas: int


@dataclass
class EmbeddingResult:
    """Summary records plus per-replica mse arrays keyed by (method, pair).

    first_eigenpairs holds replica 0's EigenPairs per method, for
    inspection and serialization.
    """

    records: list
    mse: dict
    first_eigenpairs: dict


def worker_count():
    """Thread count for replica loops: BISTOCH_THREADS or the CPU count."""
    env = os.environ.get("BISTOCH_THREADS")
    if env is not None:
        count = int(env)
        if count < 1:
            raise ValueError("BISTOCH_THREADS must be >= 1")
        return count
    return os.cpu_count() or 1


def rel_errors(est, ref):
    """Relative 2-norm and sup-norm errors of est against a nonzero ref."""
    est = np.asarray(est, dtype=float)
    ref = np.asarray(ref, dtype=float)
    ref2 = np.linalg.norm(ref)
    refinf = np.max(np.abs(ref))
    if ref2 == 0 or refinf == 0:
        raise ValueError("reference must be nonzero")
    return (
        float(np.linalg.norm(est - ref) / ref2),
        float(np.max(np.abs(est - ref)) / refinf),
    )


def _noisy_dataset(n, spec, noise_model, seed):
    ds = sample_dataset(n, spec, seed)
    if noise_model is None:
        return ds
    embedded = Dataset(
        t=ds.t,
        clean_points=embed_ambient(ds.clean_points, noise_model.m),
        seed=ds.seed,
    )
    return add_noise(embedded, noise_model, seed + NOISE_SEED_OFFSET)


def pointwise_experiment(
    n, spec, epsilon, kind, sk_config=None, noise_model=None, seed=0
):
    """One pipeline run: sample, scale, apply, compare to the closed form.

    The unscaled zero-diagonal kernel feeds either the symmetric
    scaling (BISTOCH_* kinds, using sk_config) or the degree
    normalization (DM_* kinds); the reference is the closed-form
    weighted Laplacian evaluated at the clean intrinsic coordinates,
    also when the observed points are noisy.
    """
    if not isinstance(kind, LaplacianKind):
        raise ValueError(f"unknown laplacian kind: {kind!r}")
    ds = _noisy_dataset(n, spec, noise_model, seed)
    aff = build_affinity(
        ds.points, epsilon, intrinsic_dim=1, zero_diag=True, convention=Convention.UNSCALED
    )
    if kind in SK_KINDS:
        scaling = approx_sym_sk(aff, sk_config)
        scaled = bistochastic_affinity(aff, scaling.eta)
        sk_iters = scaling.iterations
        hits = scaling.projection_hits
        eta_norm = to_normalized_convention(scaling.eta, aff)
        inliers = (
            ~ds.outlier_flags if ds.outlier_flags is not None else np.ones(n, bool)
        )
        min_eta = float(np.min(eta_norm[inliers]))
    else:
        scaled = dm_affinity(aff)
        sk_iters, hits, min_eta = 0, 0, None
    lap = laplacian_from_affinity(scaled, KIND_FORM[kind])
    est = apply_rescaled(lap, test_function(ds.t))
    relerr2, relerrinf = rel_errors(est, delta_p_f(ds.t, spec))
    return PointwiseResult(
        relerr2=relerr2,
        relerrinf=relerrinf,
        sk_iters=sk_iters,
        projection_hits=hits,
        min_inlier_eta=min_eta,
    )


def epsilon_sweep(
    n,
    spec,
    epsilons,
    replicas,
    kind,
    sk_config=None,
    noise_model=None,
    base_seed=0,
    threads=None,
):
    """Replicated pointwise runs over a bandwidth grid.

    epsilons must be positive and non-decreasing.  Replica r reuses
    dataset seed base_seed + r at every grid point, so per-epsilon
    aggregates are over the same family of datasets.  Means and
    standard deviations are population-style (ddof=0); mean_sk_iters is
    0.0 for the dm kinds.
    """
    epsilons = [float(e) for e in epsilons]
    if len(epsilons) == 0:
        raise ValueError("epsilons must be non-empty")
    if min(epsilons) <= 0:
        raise ValueError("epsilons must be positive")
    if any(b < a for a, b in zip(epsilons, epsilons[1:])):
        raise ValueError("epsilons must be non-decreasing")
    if replicas < 1:
        raise ValueError("replicas must be >= 1")
    workers = threads if threads is not None else worker_count()

    records = []
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for eps in epsilons:
            results = list(
                pool.map(
                    lambda r: pointwise_experiment(
                        n,
                        spec,
                        eps,
                        kind,
                        sk_config=sk_config,
                        noise_model=noise_model,
                        seed=base_seed + r,
                    ),
                    range(replicas),
                )
            )
            err2 = np.array([res.relerr2 for res in results])
            errinf = np.array([res.relerrinf for res in results])
            iters = np.array([res.sk_iters for res in results], dtype=float)
            records.append(
                SweepRecord(
                    epsilon=eps,
                    relerr2_mean=float(err2.mean()),
                    relerr2_std=float(err2.std()),
                    relerrinf_mean=float(errinf.mean()),
                    relerrinf_std=float(errinf.std()),
                    mean_sk_iters=float(iters.mean()),
                    replicas=replicas,
                )
            )
    return records


def slope_fit(log_eps, log_err, index_range):
    """Least-squares slope of log_err vs log_eps over a half-open index range."""
    start, stop = index_range
    x = np.asarray(log_eps, dtype=float)[start:stop]
    y = np.asarray(log_err, dtype=float)[start:stop]
    if x.size < 2:
        raise ValueError("index_range must cover at least 2 points")
    if np.ptp(x) == 0:
        raise ValueError("log_eps is constant on the range")
    return float(np.polyfit(x, y, 1)[0])


def align_pair(v, r):
    """Align a 2-column frame onto a reference over scale and O(2).

    Minimizes ||s V Q - R||_F^2 over s >= 0 and orthogonal Q (including
    reflections).  With M = V^T R = U S W^T the minimizer is Q = U W^T,
    s = (s1 + s2) / ||V||_F^2; if M is (near) rank-deficient the SVD
    factor is not unique, so Q falls back to a dense search over
    rotation angles and reflection.

    Returns an AlignmentResult whose mse is the minimum divided by the
    number of entries (2n).
    """
    v = np.asarray(v, dtype=float)
    r = np.asarray(r, dtype=float)
    if v.ndim != 2 or v.shape[1] != 2 or v.shape != r.shape:
        raise ValueError("v and r must both be (n, 2)")
    vnorm2 = float(np.sum(v * v))
    if vnorm2 == 0:
        raise ValueError("frame must be nonzero")
    m = v.T @ r
    u, sig, wt = svd(m)
    if sig[0] == 0 or sig[1] / sig[0] < 1e-12:
        best = None
        angles = np.linspace(0.0, 2.0 * np.pi, 3600, endpoint=False)
        for theta in angles:
            c, s = np.cos(theta), np.sin(theta)
            for refl in (1.0, -1.0):
                q = np.array([[c, -s * refl], [s, c * refl]])
                scale = max(float(np.sum((v @ q) * r)) / vnorm2, 0.0)
                err = float(np.sum((scale * (v @ q) - r) ** 2))
                if best is None or err < best[0]:
                    best = (err, scale, q)
        err, scale, q = best
        return AlignmentResult(mse=err / v.size, scale=scale, rotation=q)
    q = u @ wt
    scale = float(sig.sum()) / vnorm2
    err = max(float(np.sum(r * r)) - float(sig.sum()) ** 2 / vnorm2, 0.0)
    return AlignmentResult(mse=err / v.size, scale=scale, rotation=q)


def _embed_one(n, noise_model, epsilon, sk_config, seed):
    ds = _noisy_dataset(n, DensitySpec.UNIFORM_CIRCLE, noise_model, seed)
    aff = build_affinity(
        ds.points, epsilon, intrinsic_dim=1, zero_diag=True, convention=Convention.UNSCALED
    )
    scaling = approx_sym_sk(aff, sk_config)
    mse = {}
    eigs = {}
    for method, scaled in (
        ("sk", bistochastic_affinity(aff, scaling.eta)),
        ("dm", dm_affinity(aff)),
    ):
        lap = laplacian_from_affinity(scaled, LaplacianForm.RANDOM_WALK)
        eig = smallest_eigenpairs(lap, 5)
        eigs[method] = eig
        for pair, (lo, k) in ((1, (1, 1)), (2, (3, 2))):
            ref = np.stack(
                [
                    np.sin(2.0 * np.pi * k * ds.t),
                    np.cos(2.0 * np.pi * k * ds.t),
                ],
                axis=-1,
            )
            mse[(method, pair)] = align_pair(eig.vectors[:, lo : lo + 2], ref).mse
    return mse, eigs


def embedding_experiment(
    n, noise_model, epsilon, sk_config=None, replicas=1, base_seed=0, threads=None
):
    """Spectral embedding quality of both pipelines on the noisy circle.

    For each replica, the two lowest non-trivial eigenvector pairs of
    the random-walk Laplacian (bistochastic and dm pipelines) are
    aligned against the first and second circle harmonics
    {sin 2 pi k t, cos 2 pi k t}, k = 1, 2, evaluated at the clean
    intrinsic coordinates.  Returns per-(method, pair) mse summaries
    plus the per-replica arrays.
    """
    if replicas < 1:
        raise ValueError("replicas must be >= 1")
    workers = threads if threads is not None else worker_count()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        per_rep = list(
            pool.map(
                lambda r: _embed_one(
                    n, noise_model, epsilon, sk_config, base_seed + r
                ),
                range(replicas),
            )
        )
    mse = {}
    records = []
    for method in ("sk", "dm"):
        for pair in (1, 2):
            arr = np.array([rep[0][(method, pair)] for rep in per_rep])
            mse[(method, pair)] = arr
            records.append(
                EmbeddingRecord(
                    method=method,
                    pair=pair,
                    mse_mean=float(arr.mean()),
                    mse_std=float(arr.std()),
                    replicas=replicas,
                )
            )
    return EmbeddingResult(records=records, mse=mse, first_eigenpairs=per_rep[0][1])


def write_sweep_csv(records, path):
    """Write sweep records with the documented 7-column header."""
    rows = [
        (
            fmt(rec.epsilon),
            fmt(rec.relerr2_mean),
            fmt(rec.relerr2_std),
            fmt(rec.relerrinf_mean),
            fmt(rec.relerrinf_std),
            fmt(rec.mean_sk_iters),
            str(rec.replicas),
        )
        for rec in records
    ]
    write_rows(path, SWEEP_HEADER, rows)


def write_embedding_csv(records, path):
    """Write embedding records with the documented 5-column header."""
    rows = [
        (
            rec.method,
            str(rec.pair),
            fmt(rec.mse_mean),
            fmt(rec.mse_std),
            str(rec.replicas),
        )
        for rec in records
    ]
    write_rows(path, EMBEDDING_HEADER, rows)
