"""Dirichlet-type norms, de Branges-Rovnyak kernels and composition bounds."""

from ._dirbound import (
    DirboundError,
    Symbol,
    bound_check,
    dirichlet_norm_sq,
    double_integral,
    equivalence_ratio,
    estimate_sup,
    kernel,
    rank_check,
    run,
    validate_main_theorem_params,
    validate_params,
)

__all__ = [
    "DirboundError",
    "Symbol",
    "bound_check",
    "dirichlet_norm_sq",
    "double_integral",
    "equivalence_ratio",
    "estimate_sup",
    "kernel",
    "rank_check",
    "run",
    "validate_main_theorem_params",
    "validate_params",
]
