"""Certification toolkit for compressive-sensing measurement matrices."""

from .certify import (
    CertificationReport,
    CoherenceResult,
    NormalizationError,
    RipProfile,
    RipResult,
    SparkResult,
    certify,
    coherence,
    condition_number_bound,
    next_combination,
    rip_constant,
    rip_profile,
    spark,
    welch_bound,
)
from .dft_uniqueness import (
    DftUniquenessResult,
    MissingSamplePattern,
    dft_sparsity_limit,
    dft_uniqueness_oracle,
    load_pattern,
    stride_count,
)
from .matrix_core import (
    CsvParseError,
    CsvShapeError,
    DegenerateColumnError,
    HermitianGram,
    MeasurementMatrix,
    SupportSet,
    build_gaussian,
    build_partial_idft,
    build_random_partial_fourier,
    gram,
    load_matrix_csv,
    normalize_columns,
    save_matrix_csv,
    select_columns,
)
from .recon import (
    DegenerateSupportError,
    ExperimentReport,
    SparseVector,
    generate_sparse_signal,
    ls_on_support,
    measure,
    monte_carlo,
    omp,
)

__version__ = "0.1.0"
