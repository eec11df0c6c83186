"""Essential tensor learning for multi-view spectral clustering.

Builds per-view Markov transition matrices, stacks and rotates them into a
3-order tensor, recovers the low-tubal-rank essential part by ADMM under a
tensor-nuclear-norm plus fiber-sparse split, and clusters the aggregated
transition matrix with walk-based spectral clustering.
"""

from .datagen import (
    MultiViewSpec,
    complementary_spec,
    gen_lowrank_sparse,
    gen_multiview,
    standard_spec,
)
from .errors import (
    DegenerateData,
    EigenFailure,
    EtlmscError,
    IfftNotReal,
    LengthMismatch,
    NoConvergence,
    NotConverged,
    RankTooLarge,
    ShapeMismatch,
    SvdDidNotConverge,
    ViewSizeMismatch,
    ZeroDegree,
)
from .graph import (
    Partition,
    SimilarityMatrix,
    condition_transition,
    gaussian_similarity,
    kmeans,
    markov_spectral_cluster,
    normalized_laplacian,
    spectral_embed,
    stationary_distribution,
    transition_matrix,
)
from .metrics import accuracy, all_metrics, contingency, hungarian, nmi, pair_metrics
from .solver import (
    EtlmscResult,
    SolverConfig,
    SolverTrace,
    admm_solve,
    aggregate_zstar,
    baselines,
    build_probability_tensor,
    cluster,
    default_sparsity_weight,
    solve_e_subproblem,
)
from .tensor_core import (
    bcirc,
    bvec,
    fft_mode3,
    fold_mode3,
    fro_norm,
    frontal_slice,
    ifft_mode3,
    l1_norm,
    l21_mode3,
    linf_norm,
    matricize_mode3,
    norms,
    rotate,
)
from .tsvd import (
    TSvdFactors,
    identity_tensor,
    t_product,
    t_svd,
    tnn,
    transpose_t,
    tubal_shrink,
    tubal_shrink_with_norm,
)

__version__ = "0.1.0"
