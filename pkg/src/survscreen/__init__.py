"""Model-free screening of ultrahigh-dimensional censored survival data.

The screening utility is a kernel dependence measure between each
covariate and the standardized pair (observed time, censoring status);
covariates are ranked by it and the top floor(n / ln n) retained. No
regression model is fit anywhere, so the ranking is robust to the true
relationship between covariates and survival. A censored-data simulator
and a replicated-experiment harness with the usual screening metrics
(minimum model size, selection proportions) are included.
"""

from .evaluate import (
    EvalSummary,
    ReplicationRecord,
    aggregate,
    min_model_size,
    rank_positions,
    run_experiment,
    selection_proportions,
    summarize_records,
)
from .exceptions import (
    CalibrationError,
    DegenerateDataError,
    DegenerateStatusError,
    DegenerateTimesError,
    InfeasibleTargetError,
    NoConvergenceError,
    ParseError,
    ValidationError,
)
from .kernels import GAUSSIAN_DEFAULT, KernelSpec, center, gram, hsic, hsic_pair
from .screening import (
    ScreenResult,
    StandardizedResponse,
    SurvivalDataset,
    dc_utility,
    default_cutoff,
    screen,
    standardize,
)
from .simulate import (
    ACTIVE_SETS,
    GeneratedData,
    SimScenario,
    calibrate_censoring,
    censoring_scale,
    expected_censoring_rate,
    generate,
    model_beta,
    sample_ar1_normal,
    sample_cox_time,
    sample_nonlinear_time,
    sample_transformation_time,
)

__version__ = "0.1.0"

__all__ = [
    "ACTIVE_SETS",
    "CalibrationError",
    "DegenerateDataError",
    "DegenerateStatusError",
    "DegenerateTimesError",
    "EvalSummary",
    "GAUSSIAN_DEFAULT",
    "GeneratedData",
    "InfeasibleTargetError",
    "KernelSpec",
    "NoConvergenceError",
    "ParseError",
    "ReplicationRecord",
    "ScreenResult",
    "SimScenario",
    "StandardizedResponse",
    "SurvivalDataset",
    "ValidationError",
    "aggregate",
    "calibrate_censoring",
    "censoring_scale",
    "expected_censoring_rate",
    "center",
    "dc_utility",
    "default_cutoff",
    "generate",
    "gram",
    "hsic",
    "hsic_pair",
    "min_model_size",
    "model_beta",
    "rank_positions",
    "run_experiment",
    "sample_ar1_normal",
    "sample_cox_time",
    "sample_nonlinear_time",
    "sample_transformation_time",
    "screen",
    "selection_proportions",
    "standardize",
    "summarize_records",
]
