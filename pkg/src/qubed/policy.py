"""Measurement policies and trajectory simulation.

A policy decides the next evolution time, either adaptively (maximizing
expected utility under the current posterior) or from a precomputed schedule
such as the Nyquist comb t_k = k*pi/omega_max.  Simulation draws outcomes
from the likelihood at a known true frequency with a seeded generator, so
runs are exactly reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import pi

import numpy as np

from .design import DesignDomain, Utility, _UtilityTable, _best_time
from .inference import Distribution, bayes_update, mean, variance
from .model import Experiment, LikelihoodModel, outcome_probability

__all__ = [
    "Schedule",
    "nyquist_schedule",
    "TrajectoryStep",
    "TrajectoryRecord",
    "greedy_step",
    "run_adaptive",
    "run_schedule",
]


@dataclass(frozen=True)
class Schedule:
    """A fixed, ordered list of evolution times."""

    times: tuple[float, ...]

    def __post_init__(self):
        if len(self.times) == 0:
            raise ValueError("schedule must contain at least one time")
        for t in self.times:
            if not t >= 0.0:
                raise ValueError(f"schedule times must be >= 0, got {t}")

    def __len__(self) -> int:
        return len(self.times)


def nyquist_schedule(n_measurements: int, omega_max: float) -> Schedule:
    """Times t_k = k*pi/omega_max for k = 1..n, the classical comb for
    resolving frequencies up to omega_max."""
    if n_measurements < 1:
        raise ValueError(f"n_measurements must be >= 1, got {n_measurements}")
    if not omega_max > 0.0:
        raise ValueError(f"omega_max must be positive, got {omega_max}")
    return Schedule(tuple(k * pi / omega_max for k in range(1, n_measurements + 1)))


@dataclass(frozen=True)
class TrajectoryStep:
    """One measurement: the time used, the observed bit, and the posterior
    summary after updating on it."""

    time: float
    outcome: int
    posterior_mean: float
    posterior_variance: float


@dataclass(frozen=True)
class TrajectoryRecord:
    """A complete simulated run."""

    steps: tuple[TrajectoryStep, ...]
    final_estimate: float
    final_variance: float
    true_omega: float
    seed: int


def greedy_step(dist: Distribution, model: LikelihoodModel, utility: Utility,
                domain: DesignDomain) -> Experiment:
    """The next experiment a greedy utility-maximizer performs."""
    table = _UtilityTable.for_distribution(model, dist, domain.times())
    t_hat, _ = _best_time(table, dist.weights, utility, domain.refine_tol)
    return Experiment(time=t_hat)


def _simulate(true_omega: float, model: LikelihoodModel, prior: Distribution,
              choose_time, n_measurements: int, seed: int) -> TrajectoryRecord:
    a, b = prior.support
    if not a <= true_omega <= b:
        raise ValueError(f"true_omega {true_omega} outside prior support [{a}, {b}]")
    rng = np.random.default_rng(seed)
    dist = prior
    steps = []
    for _ in range(n_measurements):
        t = choose_time(dist)
        p0 = outcome_probability(model, true_omega, t, 0)
        d = int(rng.random() >= p0)
        dist = bayes_update(dist, model, t, d)
        steps.append(TrajectoryStep(time=t, outcome=d, posterior_mean=mean(dist),
                                    posterior_variance=variance(dist)))
    return TrajectoryRecord(steps=tuple(steps), final_estimate=steps[-1].posterior_mean,
                            final_variance=steps[-1].posterior_variance,
                            true_omega=true_omega, seed=seed)


def run_adaptive(true_omega: float, model: LikelihoodModel, prior: Distribution,
                 n_measurements: int, utility: Utility, domain: DesignDomain,
                 seed: int = 0) -> TrajectoryRecord:
    """Simulate a greedy adaptive run of ``n_measurements`` experiments."""
    if n_measurements < 1:
        raise ValueError(f"n_measurements must be >= 1, got {n_measurements}")
    table = _UtilityTable.for_distribution(model, prior, domain.times())

    def choose(dist: Distribution) -> float:
        t_hat, _ = _best_time(table, dist.weights, utility, domain.refine_tol)
        return t_hat

    return _simulate(true_omega, model, prior, choose, n_measurements, seed)


def run_schedule(true_omega: float, model: LikelihoodModel, prior: Distribution,
                 schedule: Schedule, seed: int = 0) -> TrajectoryRecord:
    """Simulate a run that measures at the schedule's times, in order."""
    it = iter(schedule.times)
    return _simulate(true_omega, model, prior, lambda dist: next(it),
                     len(schedule), seed)
