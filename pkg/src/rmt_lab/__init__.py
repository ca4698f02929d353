"""rmt-lab: constrained 2x2 random-matrix ensembles.

Exact samplers for Hermitian and PT-symmetric 2x2 ensembles restricted to
geometric constraint surfaces, the analytic level-spacing law of each one,
and the statistical machinery (Kolmogorov-Smirnov, chi-square, invariance
checks, divergence probe) to verify that samples and laws agree.
"""

from ._kernels import active_backend
from .analytic import (
    SpacingLaw,
    cdf,
    law_description,
    mean_spacing,
    normalization_constant,
    pdf,
    spacing_law,
    spacing_moment,
    support,
)
from .ensembles import (
    ENSEMBLE_KINDS,
    GAUSS_SIGMA,
    HERMITIAN_KINDS,
    PT_KINDS,
    EnsembleSpec,
    GaussianProposal,
    MatrixSample,
    SampleBatch,
    draw,
    rejection_sample_density,
    sample_batch,
    spacings,
    stream,
    worker_seed_sequences,
)
from .matrix_core import (
    GeneralComplexParams,
    HermitianParams,
    InvariantSet,
    PTParams,
    Spectrum,
    compose_hermitian,
    compose_pt,
    eigenpair,
    invariants,
    pauli_compose,
    pauli_decompose,
    pt_classify,
    random_group_element,
    transform,
)
from .stats import (
    ChiSquareResult,
    Histogram,
    MomentsResult,
    chi_square,
    default_edges,
    histogram,
    ks_statistic,
    moments,
)
from .verify import (
    GOLDEN_SEEDS,
    InvarianceReport,
    ProbeRow,
    VerificationReport,
    divergence_probe,
    invariance_suite,
    verify_ensemble,
)

__version__ = "0.1.0"
