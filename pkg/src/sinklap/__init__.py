"""Bi-stochastic kernel normalization and graph Laplacians.

Symmetric Sinkhorn-Knopp scaling of Gaussian kernel matrices, the
resulting bistochastic graph Laplacians, the classical degree-based
alternative, synthetic 1D-manifold datasets with outlier noise models,
and reproducible convergence / robustness / spectral-embedding
experiments on top of them.
"""

from .errors import DegenerateInputError, NumericalFailureError, UsageError
from .experiments import (
    NOISE_SEED_OFFSET,
    AlignmentResult,
    EmbeddingRecord,
    EmbeddingResult,
    PointwiseResult,
    SweepRecord,
    align_pair,
    embedding_experiment,
    epsilon_sweep,
    pointwise_experiment,
    rel_errors,
    slope_fit,
    worker_count,
    write_embedding_csv,
    write_sweep_csv,
)
from .kernel import (
    Affinity,
    Convention,
    build_affinity,
    degree,
    gaussian_kernel,
    kernel_moments,
    normalized_prefactor,
)
from .laplacian import (
    EigenPairs,
    LaplacianForm,
    LaplacianKind,
    LaplacianOp,
    apply_rescaled,
    bistochastic_affinity,
    dm_affinity,
    laplacian_from_affinity,
    smallest_eigenpairs,
)
from .manifold import (
    Dataset,
    DensitySpec,
    circle_point,
    curve_point,
    delta_p_f,
    density,
    density_cdf,
    density_cdf_inverse,
    embed_ambient,
    read_dataset_csv,
    sample_dataset,
    test_function,
    write_dataset_csv,
)
from .noise import NoiseKind, NoiseModel, add_noise, attenuation, cross_term_stats
from .sinkhorn import (
    ScalingResult,
    SkConfig,
    approx_sym_sk,
    convert_c_sk,
    population_reference,
    scaling_residual,
    to_normalized_convention,
)

__version__ = "0.1.0"
