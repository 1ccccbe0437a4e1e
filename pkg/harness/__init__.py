"""Harness package initialization."""

from .experiments import (
    RESULT_COLUMNS,
    SUMMARY_COLUMNS,
    Condition,
    ExperimentReport,
    ExperimentSpec,
    build_conditions,
    ensure_models,
    model_key,
    run_experiment,
    summarize,
    train_model,
)
from .journey import JourneyMetrics, run_journey
from .model_io import (
    MODEL_FORMAT_VERSION,
    MissingModelError,
    ModelDimensionError,
    ModelDocument,
    ModelFileError,
    ModelVersionError,
    check_dimensions,
    load_model,
    load_model_document,
    save_model,
)
from .plots import emit_plots, plot_training_curve

__all__ = [
    "MODEL_FORMAT_VERSION",
    "RESULT_COLUMNS",
    "SUMMARY_COLUMNS",
    "Condition",
    "ExperimentReport",
    "ExperimentSpec",
    "JourneyMetrics",
    "MissingModelError",
    "ModelDimensionError",
    "ModelDocument",
    "ModelFileError",
    "ModelVersionError",
    "build_conditions",
    "check_dimensions",
    "emit_plots",
    "ensure_models",
    "load_model",
    "load_model_document",
    "model_key",
    "plot_training_curve",
    "run_experiment",
    "run_journey",
    "save_model",
    "summarize",
    "train_model",
]
