"""Experiment scoring and selection.

An experiment (an evolution time ``t``) is scored by its expected utility
under the current distribution:

    U(t) = sum_d Pr(d | t) * u(posterior_d)

where ``u`` is either the negative differential entropy (information gain) or
the negative variance of the hypothetical posterior.  Outcomes with zero
predictive probability contribute nothing.

``optimize_experiment`` finds the maximizer over a bounded time domain with a
deterministic two-stage search: a uniform coarse scan followed by
golden-section refinement inside the cells adjacent to the best coarse point.
The coarse utilities for all candidate times reduce to a few matrix-vector
products against precomputed likelihood tables (``_UtilityTable``), which the
risk-tree code reuses so every caller scores experiments through the same
arithmetic.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .inference import Distribution
from .model import LikelihoodModel, outcome_probability

__all__ = [
    "Utility",
    "INFO_GAIN",
    "NEG_VARIANCE",
    "DesignDomain",
    "expected_utility",
    "utility_profile",
    "optimize_experiment",
]

_COARSE_TIE_TOL = 1e-12
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


class Utility(enum.Enum):
    """Which utility function scores candidate experiments."""

    INFO_GAIN = "infogain"
    NEG_VARIANCE = "negvar"


INFO_GAIN = Utility.INFO_GAIN
NEG_VARIANCE = Utility.NEG_VARIANCE


@dataclass(frozen=True)
class DesignDomain:
    """Bounded search domain for evolution times.

    ``n_grid`` is the coarse-scan resolution; ``refine_tol`` is the bracket
    width at which golden-section refinement stops.
    """

    t_min: float = 0.0
    t_max: float = 12.0 * math.pi
    n_grid: int = 240
    refine_tol: float = 1e-6

    def __post_init__(self):
        if not self.t_min >= 0.0:
            raise ValueError(f"t_min must be >= 0, got {self.t_min}")
        if not self.t_max > self.t_min:
            raise ValueError(f"need t_min < t_max, got [{self.t_min}, {self.t_max}]")
        if self.n_grid < 2:
            raise ValueError(f"n_grid must be >= 2, got {self.n_grid}")
        if not self.refine_tol > 0.0:
            raise ValueError(f"refine_tol must be positive, got {self.refine_tol}")

    def times(self) -> np.ndarray:
        """The uniform coarse-scan grid over [t_min, t_max]."""
        return np.linspace(self.t_min, self.t_max, self.n_grid)


class _UtilityTable:
    """Precomputed outcome-0 likelihoods (and moment-weighted copies) for a
    fixed set of candidate times against a fixed frequency grid.

    ``profile`` scores every candidate time for one weight vector;  ``at``
    scores a single arbitrary time.  Weights must be normalized.
    """

    def __init__(self, model: LikelihoodModel, omegas: np.ndarray, cell_width: float,
                 times: np.ndarray):
        self.model = model
        self.omegas = omegas
        self.omegas2 = omegas * omegas
        self.cell_width = cell_width
        self.times = np.asarray(times, dtype=np.float64)
        self.like0 = outcome_probability(model, omegas[None, :], self.times[:, None], 0)
        self.like0_w = self.like0 * omegas
        self.like0_w2 = self.like0 * self.omegas2

    @classmethod
    def for_distribution(cls, model: LikelihoodModel, dist: Distribution,
                         times: np.ndarray) -> "_UtilityTable":
        return cls(model, dist.points, dist.cell_width, times)

    def profile(self, weights: np.ndarray, utility: Utility) -> np.ndarray:
        """Expected utility at every candidate time, as one vector."""
        p0 = self.like0 @ weights
        p1 = 1.0 - p0
        if utility is Utility.NEG_VARIANCE:
            m1_0 = self.like0_w @ weights
            m2_0 = self.like0_w2 @ weights
            tot1 = weights @ self.omegas
            tot2 = weights @ self.omegas2
            ev0 = _branch_second_moment(m2_0, m1_0, p0)
            ev1 = _branch_second_moment(tot2 - m2_0, tot1 - m1_0, p1)
            return -(ev0 + ev1)
        joint0 = self.like0 * weights
        joint1 = weights - joint0
        # Row sums of joint1 stay >= 0 where 1 - p0 can round negative.
        p1 = joint1.sum(axis=1)
        ent_terms = xlogy(joint0, joint0).sum(axis=1) + xlogy(joint1, joint1).sum(axis=1)
        mix_terms = xlogy(p0, p0) + xlogy(p1, p1)
        return ent_terms - mix_terms - math.log(self.cell_width)

    def at(self, weights: np.ndarray, t: float, utility: Utility) -> float:
        """Expected utility of a single candidate time."""
        like0 = outcome_probability(self.model, self.omegas, t, 0)
        joint0 = weights * like0
        p0 = joint0.sum()
        p1 = 1.0 - p0
        if utility is Utility.NEG_VARIANCE:
            m1_0 = joint0 @ self.omegas
            m2_0 = joint0 @ self.omegas2
            ev0 = _branch_second_moment(m2_0, m1_0, p0)
            ev1 = _branch_second_moment(weights @ self.omegas2 - m2_0,
                                        weights @ self.omegas - m1_0, p1)
            return float(-(ev0 + ev1))
        joint1 = weights - joint0
        p1 = joint1.sum()
        ent = xlogy(joint0, joint0).sum() + xlogy(joint1, joint1).sum()
        mix = xlogy(p0, p0) + xlogy(p1, p1)
        return float(ent - mix - math.log(self.cell_width))


def _branch_second_moment(m2, m1, prob):
    """Pr(d) * Var(posterior_d) from unnormalized branch moments.

    Equals ``m2 - m1^2 / prob``; branches with zero predictive probability
    contribute 0, and rounding noise is clamped so the result stays >= 0.
    """
    with np.errstate(divide="ignore", invalid="ignore"):
        ev = np.where(prob > 0.0, m2 - m1 * m1 / np.where(prob > 0.0, prob, 1.0), 0.0)
    return np.maximum(ev, 0.0)


def expected_utility(dist: Distribution, model: LikelihoodModel, t: float,
                     utility: Utility) -> float:
    """Expected utility of measuring at time ``t`` under ``dist``."""
    table = _UtilityTable.for_distribution(model, dist, np.empty(0))
    return table.at(dist.weights, t, utility)


def utility_profile(dist: Distribution, model: LikelihoodModel, times: np.ndarray,
                    utility: Utility) -> np.ndarray:
    """Expected utility at each of ``times`` (vectorized ``expected_utility``)."""
    table = _UtilityTable.for_distribution(model, dist, times)
    return table.profile(dist.weights, utility)


def _golden_max(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Deterministic golden-section maximization of ``f`` on [lo, hi]."""
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    mid = 0.5 * (a + b)
    fm = f(mid)
    best_t, best_u = c, fc
    if fd > best_u:
        best_t, best_u = d, fd
    if fm > best_u:
        best_t, best_u = mid, fm
    return best_t, best_u


def _best_time(table: _UtilityTable, weights: np.ndarray, utility: Utility,
               refine_tol: float | None) -> tuple[float, float]:
    """Coarse-scan argmax over the table's times, optionally golden-refined.

    Ties within 1e-12 of the coarse maximum break toward the smallest time.
    With refinement the returned utility always dominates the whole coarse
    scan.  ``refine_tol=None`` restricts the choice to the grid itself.
    """
    utilities = table.profile(weights, utility)
    j = int(np.flatnonzero(utilities >= utilities.max() - _COARSE_TIE_TOL)[0])
    t_best, u_best = float(table.times[j]), float(utilities[j])
    if refine_tol is None:
        return t_best, u_best
    lo = float(table.times[j - 1]) if j > 0 else t_best
    hi = float(table.times[j + 1]) if j + 1 < table.times.size else t_best
    if hi - lo > refine_tol:
        t_ref, u_ref = _golden_max(lambda t: table.at(weights, t, utility), lo, hi, refine_tol)
        if u_ref > u_best:
            return t_ref, u_ref
    return t_best, u_best


def optimize_experiment(dist: Distribution, model: LikelihoodModel, utility: Utility,
                        domain: DesignDomain) -> tuple[float, float]:
    """Utility-maximizing time within the domain; returns ``(t_hat, u_hat)``.

    Deterministic: identical inputs give bit-identical results.
    """
    table = _UtilityTable.for_distribution(model, dist, domain.times())
    return _best_time(table, dist.weights, utility, domain.refine_tol)
