"""Adaptive Bayesian experimental design for single-qubit frequency estimation.

Estimate the precession frequency of a qubit from binary measurement
outcomes: maintain a gridded posterior, pick each evolution time by
maximizing an expected utility, and evaluate whole strategies exactly by
enumerating their outcome trees.
"""

from .design import (
    INFO_GAIN,
    NEG_VARIANCE,
    DesignDomain,
    Utility,
    expected_utility,
    optimize_experiment,
    utility_profile,
)
from .inference import (
    Distribution,
    PosteriorUndefined,
    bayes_update,
    make_uniform_prior,
    mean,
    neg_entropy,
    predictive,
    variance,
)
from .model import IDEAL, NOISY, Experiment, LikelihoodModel, outcome_probability
from .policy import (
    Schedule,
    TrajectoryRecord,
    TrajectoryStep,
    greedy_step,
    nyquist_schedule,
    run_adaptive,
    run_schedule,
)
from .risk import (
    STRATEGIES,
    RiskCurve,
    TreeTooLarge,
    default_time_grid,
    exact_bayes_risk_global,
    exact_bayes_risk_greedy,
    exact_bayes_risk_offline,
    risk_curve,
)

__version__ = "0.1.0"

__all__ = [
    "IDEAL",
    "NOISY",
    "INFO_GAIN",
    "NEG_VARIANCE",
    "STRATEGIES",
    "LikelihoodModel",
    "Experiment",
    "outcome_probability",
    "Distribution",
    "PosteriorUndefined",
    "make_uniform_prior",
    "bayes_update",
    "predictive",
    "mean",
    "variance",
    "neg_entropy",
    "Utility",
    "DesignDomain",
    "expected_utility",
    "utility_profile",
    "optimize_experiment",
    "Schedule",
    "nyquist_schedule",
    "TrajectoryStep",
    "TrajectoryRecord",
    "greedy_step",
    "run_adaptive",
    "run_schedule",
    "TreeTooLarge",
    "RiskCurve",
    "default_time_grid",
    "exact_bayes_risk_offline",
    "exact_bayes_risk_greedy",
    "exact_bayes_risk_global",
    "risk_curve",
    "__version__",
]
