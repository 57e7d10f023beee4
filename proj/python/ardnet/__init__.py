"""Network recovery from aggregated relational data.

Thin Python layer over the C++ core: nuclear-norm penalized least squares
(accelerated proximal gradient), network simulators and diagnostics.
"""

from ._ardnet import (
    CsvParseError,
    SingularSystemError,
    SolverResult,
    benchmark,
    default_penalty,
    default_trait_count,
    effective_rank,
    exact_least_squares,
    expected_degrees,
    fit,
    frobenius_norm,
    generate_ard,
    generate_traits,
    global_clustering,
    gradient_step,
    mse,
    nu_constant,
    nuclear_norm,
    objective,
    probability_matrix,
    read_matrix_csv,
    relative_frobenius_error,
    sample_adjacency,
    soft_threshold_singular_values,
    spectral_norm,
    svd,
    symmetrize,
    theoretical_bound,
    write_matrix_csv,
)

__all__ = [name for name in dir() if not name.startswith("_")]
