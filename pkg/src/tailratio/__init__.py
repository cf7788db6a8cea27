"""Tail-index estimation from the log-ratio of two central order statistics."""

from .asymptotics import (
    pareto_limit_variances,
    smirnoff_cov,
    theorem1_variance,
)
from .baselines import hill, moment_dedh, pickands, t_hill
from .distributions import (
    SeedSpec,
    TailModel,
    beta,
    exponential,
    frechet,
    loglogistic,
    pareto,
    sample,
)
from .errors import (
    DegenerateRatio,
    IncompatibleSampleSize,
    IndexOutOfRange,
    NonFiniteEntry,
    NonPositiveEntry,
    TailRatioError,
)
from .estimators import confidence_interval, log_ratio, q_estimator
from .exact_law import ExactLaw, chebyshev_bound, exact_moments
from .montecarlo import ExperimentPlan, figure_grid, run_plan
from .order_stats import OrderedSample, design_indices, make_ordered, order_stat
from .special import generalized_harmonic, harmonic

__version__ = "0.1.0"
