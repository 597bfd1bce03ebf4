"""Block-maxima estimators of the extremal index and their asymptotic variances."""

from .api import ExtremalIndexEstimator, PseudoSampleTransformer, ThresholdExtremalIndex
from .asymvar import armax_model, asymptotic_variance, iid_model, sliding_gap
from .blocks import Scheme, Transform, block_maxima, pseudo_sample
from .competitors import intervals_estimator, suveges_estimator, threshold_quantile
from .estimators import EstimatorSpec, estimate, estimate_pipeline, parse_spec
from .exceptions import (
    ConvergenceError,
    DegenerateSampleError,
    DomainError,
    EilabError,
    InsufficientDataError,
)
from .mcstudy import StudyConfig, aggregate, run_study
from .sim import ModelSpec, TimeSeries, simulate

__version__ = "0.1.0"

__all__ = [
    "ExtremalIndexEstimator",
    "PseudoSampleTransformer",
    "ThresholdExtremalIndex",
    "armax_model",
    "asymptotic_variance",
    "iid_model",
    "sliding_gap",
    "Scheme",
    "Transform",
    "block_maxima",
    "pseudo_sample",
    "intervals_estimator",
    "suveges_estimator",
    "threshold_quantile",
    "EstimatorSpec",
    "estimate",
    "estimate_pipeline",
    "parse_spec",
    "ConvergenceError",
    "DegenerateSampleError",
    "DomainError",
    "EilabError",
    "InsufficientDataError",
    "StudyConfig",
    "aggregate",
    "run_study",
    "ModelSpec",
    "TimeSeries",
    "simulate",
]
