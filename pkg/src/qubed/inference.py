"""Discretized distributions over the qubit frequency, with Bayes updates.

A ``Distribution`` stores probability mass on the midpoints of a uniform
partition of its support ``[a, b]``.  Integrals against the distribution are
plain weighted sums over the grid, so normalization is exact and the
differential entropy estimator is just ``sum(w * ln(w / cell_width))``.

Distributions are immutable values: every update returns a new one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .model import LikelihoodModel, outcome_probability

__all__ = [
    "PosteriorUndefined",
    "Distribution",
    "make_uniform_prior",
    "bayes_update",
    "predictive",
    "mean",
    "variance",
    "neg_entropy",
]


class PosteriorUndefined(ValueError):
    """Raised when an observed outcome has zero probability under the current support."""


@dataclass(frozen=True)
class Distribution:
    """Probability masses on a midpoint grid over ``support = (a, b)``."""

    points: np.ndarray
    weights: np.ndarray
    support: tuple[float, float]

    def __post_init__(self):
        points = np.asarray(self.points, dtype=np.float64).copy()
        weights = np.asarray(self.weights, dtype=np.float64).copy()
        a, b = float(self.support[0]), float(self.support[1])
        if not a < b:
            raise ValueError(f"support must satisfy a < b, got ({a}, {b})")
        if points.ndim != 1 or points.shape != weights.shape or points.size < 2:
            raise ValueError("points and weights must be equal-length 1-d arrays (>= 2 points)")
        if np.any(weights < 0.0):
            raise ValueError("weights must be non-negative")
        total = weights.sum()
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1 within 1e-12, got {total!r}")
        if np.any(np.diff(points) <= 0.0):
            raise ValueError("points must be strictly increasing")
        n = points.size
        cell = (b - a) / n
        expected = a + (np.arange(n) + 0.5) * cell
        if not np.allclose(points, expected, rtol=0.0, atol=1e-9 * (b - a)):
            raise ValueError("points must be the midpoints of a uniform partition of the support")
        points.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "support", (a, b))

    @property
    def cell_width(self) -> float:
        a, b = self.support
        return (b - a) / self.points.size


def make_uniform_prior(n_points: int, support: tuple[float, float] = (0.0, 1.0)) -> Distribution:
    """Uniform prior on ``support``: ``n_points`` midpoint cells with equal mass."""
    if n_points < 2:
        raise ValueError(f"need at least 2 grid points, got {n_points}")
    a, b = float(support[0]), float(support[1])
    if not a < b:
        raise ValueError(f"support must satisfy a < b, got ({a}, {b})")
    cell = (b - a) / n_points
    points = a + (np.arange(n_points) + 0.5) * cell
    weights = np.full(n_points, 1.0 / n_points)
    return Distribution(points=points, weights=weights, support=(a, b))


def bayes_update(prior: Distribution, model: LikelihoodModel, t: float, d: int) -> Distribution:
    """Posterior after observing outcome ``d`` from an experiment of duration ``t``.

    Weights are multiplied by the per-point likelihood and renormalized; the
    grid and support are unchanged.  Raises ``PosteriorUndefined`` if the
    outcome has zero total probability on the grid.
    """
    lik = outcome_probability(model, prior.points, t, d)
    unnorm = prior.weights * lik
    total = unnorm.sum()
    if total <= 0.0:
        raise PosteriorUndefined(
            f"outcome {d} at t={t} has zero probability under the current support"
        )
    return Distribution(points=prior.points, weights=unnorm / total, support=prior.support)


def predictive(dist: Distribution, model: LikelihoodModel, t: float, d: int = 0) -> float:
    """Marginal probability of outcome ``d`` for a future experiment of duration ``t``."""
    lik = outcome_probability(model, dist.points, t, d)
    return float(dist.weights @ lik)


def mean(dist: Distribution) -> float:
    return float(dist.weights @ dist.points)


def variance(dist: Distribution) -> float:
    mu = dist.weights @ dist.points
    return float(dist.weights @ (dist.points - mu) ** 2)


def neg_entropy(dist: Distribution) -> float:
    """Negative differential entropy, ``sum_i w_i ln(w_i / cell_width)`` in nats.

    Zero-mass points contribute exactly 0.  Uniform on [0, 1] gives 0; more
    concentrated distributions give larger values.
    """
    return float(xlogy(dist.weights, dist.weights / dist.cell_width).sum())
