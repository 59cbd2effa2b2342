"""Sparse SVM estimation by over-parameterized, smoothed-hinge gradient descent."""

from .baselines import L1Config, fit_l1_svm, fit_oracle, lambda_max, soft_threshold
from .core import (
    Checkpoint,
    Dataset,
    DatasetError,
    DivergenceError,
    FitResult,
    GdConfig,
    GroundTruth,
    OverParamState,
    SignalClasses,
    SignalClassError,
    classify_signals,
    validate_dataset,
)
from .datagen import GenSpec, gen_default, gen_model1, gen_model2, generate
from .harness import ExperimentSpec, ExperimentTable, built_in_scenarios, run_experiment, write_table_csv
from .metrics import (
    CoherenceReport,
    SelectionMetrics,
    accuracy,
    coherence,
    coherence_bruteforce,
    normalized_direction_error,
    relative_error,
    selection_metrics,
)
from .smoothing import (
    SmoothedLossReport,
    hinge_loss,
    mu_update,
    per_sample_smoothed_loss,
    smoothed_gradient_beta,
    smoothed_loss,
)
from .solver import fit_gd, gd_step, gradient_field

__version__ = "0.1.0"

__all__ = [
    "Checkpoint",
    "CoherenceReport",
    "Dataset",
    "DatasetError",
    "DivergenceError",
    "ExperimentSpec",
    "ExperimentTable",
    "FitResult",
    "GdConfig",
    "GenSpec",
    "GroundTruth",
    "L1Config",
    "OverParamState",
    "SelectionMetrics",
    "SignalClassError",
    "SignalClasses",
    "SmoothedLossReport",
    "accuracy",
    "built_in_scenarios",
    "classify_signals",
    "coherence",
    "coherence_bruteforce",
    "fit_gd",
    "fit_l1_svm",
    "fit_oracle",
    "gd_step",
    "gen_default",
    "gen_model1",
    "gen_model2",
    "generate",
    "gradient_field",
    "hinge_loss",
    "lambda_max",
    "mu_update",
    "normalized_direction_error",
    "per_sample_smoothed_loss",
    "relative_error",
    "run_experiment",
    "selection_metrics",
    "smoothed_gradient_beta",
    "smoothed_loss",
    "soft_threshold",
    "validate_dataset",
    "write_table_csv",
]
