"""Outlier-column identification from a few adaptive linear sketches."""

from .sketching import (
    SampleBudget,
    SketchOperator,
    f_jl,
    make_column_sampler,
    make_gaussian_sketch,
    make_probe_vector,
    make_row_subsampler,
    max_outliers,
    min_col_budget,
    min_gamma,
    min_row_budget,
)
from .prox import LassoProblem, group_shrink, lasso_path_solve, lasso_solve, soft_threshold, svt
from .solver import (
    OpSolution,
    SolverDivergenceError,
    SolverOptions,
    SubspaceBasis,
    default_lambda,
    outlier_pursuit,
    residual_operator,
    rmc_solve,
    subspace_basis,
)
from .pipeline import (
    AcosConfig,
    MatrixSource,
    PipelineError,
    SupportEstimate,
    acos,
    extract_support,
    measurement_count,
    sacos,
    sacos_missing,
)
from .synth import (
    PhaseGridResult,
    ProblemInstance,
    add_noise,
    bernoulli_mask,
    column_incoherence,
    generate_instance,
    hypergeometric_tail_bound,
    oracle_success,
    phase_grid,
)
from .imaging import PatchGrid, patch_matrix, saliency_map, unpatch

__version__ = "0.1.0"

__all__ = [
    "AcosConfig",
    "LassoProblem",
    "MatrixSource",
    "OpSolution",
    "PatchGrid",
    "PhaseGridResult",
    "PipelineError",
    "ProblemInstance",
    "SampleBudget",
    "SketchOperator",
    "SolverDivergenceError",
    "SolverOptions",
    "SubspaceBasis",
    "SupportEstimate",
    "acos",
    "add_noise",
    "bernoulli_mask",
    "column_incoherence",
    "default_lambda",
    "extract_support",
    "f_jl",
    "generate_instance",
    "group_shrink",
    "hypergeometric_tail_bound",
    "lasso_path_solve",
    "lasso_solve",
    "make_column_sampler",
    "make_gaussian_sketch",
    "make_probe_vector",
    "make_row_subsampler",
    "max_outliers",
    "measurement_count",
    "min_col_budget",
    "min_gamma",
    "min_row_budget",
    "oracle_success",
    "outlier_pursuit",
    "patch_matrix",
    "phase_grid",
    "residual_operator",
    "rmc_solve",
    "sacos",
    "sacos_missing",
    "saliency_map",
    "soft_threshold",
    "subspace_basis",
    "svt",
    "unpatch",
]
