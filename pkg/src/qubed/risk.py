"""Exact Bayes-risk evaluation of measurement strategies.

The Bayes risk of a strategy after n measurements is the expected posterior
variance, averaged over outcome sequences (weighted by their marginal
probability) and over the prior.  For discrete outcome trees this expectation
is a finite sum, so it is evaluated exactly by walking the full binary tree of
outcome sequences rather than by Monte Carlo.

Three evaluators are provided:

* ``exact_bayes_risk_offline``: a fixed schedule of times, one tree walk over
  the 2^n outcome sequences.
* ``exact_bayes_risk_greedy``: the adaptive greedy policy, re-optimizing the
  time at every tree node.  The greedy choice depends only on the posterior,
  never on how many measurements remain, so a single walk to depth n also
  yields the risks of all shorter greedy runs (``risk_curve`` exploits this).
* ``exact_bayes_risk_global``: the globally optimal adaptive strategy over a
  finite menu of candidate times, by backward induction on unnormalized
  posteriors:  G(u, k) = min_t sum_d G(u * like_{t,d}, k + 1), with leaf value
  sum(u) * Var(u).  The final stage is evaluated for all branches of a node in
  one batch of matrix products.

Throughout, branches whose conditional probability falls below ``eps_prune``
(or is exactly zero) contribute nothing and are not expanded.  Tree sizes are
capped; exceeding a cap raises ``TreeTooLarge`` rather than starting a walk
that cannot finish.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .design import NEG_VARIANCE, DesignDomain, Utility, _UtilityTable, _best_time
from .inference import Distribution
from .model import LikelihoodModel, outcome_probability
from .policy import Schedule, nyquist_schedule

__all__ = [
    "TreeTooLarge",
    "STRATEGIES",
    "RiskCurve",
    "default_time_grid",
    "exact_bayes_risk_offline",
    "exact_bayes_risk_greedy",
    "exact_bayes_risk_global",
    "risk_curve",
]

MAX_OFFLINE_MEASUREMENTS = 20
MAX_GREEDY_MEASUREMENTS = 14
MAX_GLOBAL_MEASUREMENTS = 6
MAX_GLOBAL_GRID = 64
EPS_PRUNE = 1e-15

STRATEGIES = ("greedy-negvar", "greedy-infogain", "nyquist-bayes", "global")


class TreeTooLarge(ValueError):
    """The requested outcome tree exceeds the configured size cap."""


@dataclass(frozen=True)
class RiskCurve:
    """Bayes risk as a function of the number of measurements.

    ``entries`` holds ``(n, bayes_risk)`` pairs for n = 1..n_max; ``model``
    is the likelihood-model descriptor and ``notes`` records strategy
    parameters worth keeping next to the numbers.
    """

    strategy: str
    model: str
    entries: tuple[tuple[int, float], ...]
    notes: str = ""


def default_time_grid(domain: DesignDomain | None = None, n_points: int = 48) -> np.ndarray:
    """Uniform menu of candidate times for the global optimum: the domain
    split into ``n_points`` equal steps, endpoints at the steps (t_min itself
    excluded since a zero-length evolution is uninformative)."""
    if domain is None:
        domain = DesignDomain()
    if n_points < 1:
        raise ValueError(f"n_points must be >= 1, got {n_points}")
    j = np.arange(1, n_points + 1, dtype=np.float64)
    return domain.t_min + (domain.t_max - domain.t_min) * j / n_points


def _mass_variance(v: np.ndarray, points: np.ndarray, z: float) -> float:
    """sum(v) * Var of the normalized version of ``v``, computed in two
    passes so heavily concentrated posteriors keep full precision."""
    mu = (v @ points) / z
    return max(float(v @ np.square(points - mu)), 0.0)


def _offline_depth_risks(schedule: Schedule, prior: Distribution, model: LikelihoodModel,
                         eps_prune: float) -> np.ndarray:
    """Bayes risk after each prefix of the schedule, in one tree walk."""
    points = prior.points
    likes0 = [outcome_probability(model, points, t, 0) for t in schedule.times]
    n = len(schedule)
    risks = np.zeros(n)

    def walk(u: np.ndarray, z: float, k: int) -> None:
        v0 = u * likes0[k]
        for v in (v0, u - v0):
            zd = float(v.sum())
            if zd <= 0.0 or zd < eps_prune * z:
                continue
            risks[k] += _mass_variance(v, points, zd)
            if k + 1 < n:
                walk(v, zd, k + 1)

    walk(prior.weights, 1.0, 0)
    return risks


def exact_bayes_risk_offline(schedule: Schedule, prior: Distribution,
                             model: LikelihoodModel, *,
                             max_measurements: int = MAX_OFFLINE_MEASUREMENTS,
                             eps_prune: float = EPS_PRUNE) -> float:
    """Exact Bayes risk of measuring a fixed schedule of times."""
    if len(schedule) > max_measurements:
        raise TreeTooLarge(
            f"schedule of {len(schedule)} measurements exceeds the cap of "
            f"{max_measurements} (2^n outcome sequences)")
    return float(_offline_depth_risks(schedule, prior, model, eps_prune)[-1])


def _greedy_depth_risks(prior: Distribution, model: LikelihoodModel, utility: Utility,
                        n: int, domain: DesignDomain, time_grid, eps_prune: float) -> np.ndarray:
    """Bayes risk of the greedy policy after 1..n measurements, one walk."""
    points = prior.points
    if time_grid is None:
        table = _UtilityTable.for_distribution(model, prior, domain.times())
        refine = domain.refine_tol
    else:
        table = _UtilityTable.for_distribution(model, prior,
                                               np.asarray(time_grid, dtype=np.float64))
        refine = None
    risks = np.zeros(n)

    def walk(u: np.ndarray, z: float, k: int) -> None:
        t_hat, _ = _best_time(table, u / z, utility, refine)
        if refine is None:
            like0 = table.like0[int(np.searchsorted(table.times, t_hat))]
        else:
            like0 = outcome_probability(model, points, t_hat, 0)
        v0 = u * like0
        for v in (v0, u - v0):
            zd = float(v.sum())
            if zd <= 0.0 or zd < eps_prune * z:
                continue
            risks[k] += _mass_variance(v, points, zd)
            if k + 1 < n:
                walk(v, zd, k + 1)

    walk(prior.weights, 1.0, 0)
    return risks


def exact_bayes_risk_greedy(prior: Distribution, model: LikelihoodModel, utility: Utility,
                            n_measurements: int, domain: DesignDomain | None = None, *,
                            time_grid=None,
                            max_measurements: int = MAX_GREEDY_MEASUREMENTS,
                            eps_prune: float = EPS_PRUNE) -> float:
    """Exact Bayes risk of the greedy policy after ``n_measurements``.

    With ``time_grid`` the greedy choice is restricted to that menu of times
    (no refinement), which makes it directly comparable to the global
    optimum over the same menu.
    """
    if n_measurements < 1:
        raise ValueError(f"n_measurements must be >= 1, got {n_measurements}")
    if n_measurements > max_measurements:
        raise TreeTooLarge(
            f"greedy tree of depth {n_measurements} exceeds the cap of "
            f"{max_measurements} (each node re-optimizes the design)")
    if domain is None:
        domain = DesignDomain()
    risks = _greedy_depth_risks(prior, model, utility, n_measurements, domain,
                                time_grid, eps_prune)
    return float(risks[-1])


def _masked_branch_values(m2: np.ndarray, m1: np.ndarray, p: np.ndarray,
                          z: np.ndarray, eps_prune: float) -> np.ndarray:
    """Unnormalized branch risks p*Var, zeroed where the branch is pruned."""
    keep = (p > 0.0) & (p >= eps_prune * z)
    safe = np.where(keep, p, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ev = np.where(keep, m2 - m1 * m1 / safe, 0.0)
    return np.maximum(ev, 0.0)


def _one_step_values(rows: np.ndarray, table: _UtilityTable, eps_prune: float) -> np.ndarray:
    """For each unnormalized weight row, the best achievable expected
    posterior variance (times the row's mass) in one more measurement,
    minimizing over the table's candidate times."""
    z = rows.sum(axis=1)
    p0 = rows @ table.like0.T
    m1_0 = rows @ table.like0_w.T
    m2_0 = rows @ table.like0_w2.T
    tot1 = (rows @ table.omegas)[:, None]
    tot2 = (rows @ table.omegas2)[:, None]
    ev0 = _masked_branch_values(m2_0, m1_0, p0, z[:, None], eps_prune)
    ev1 = _masked_branch_values(tot2 - m2_0, tot1 - m1_0, z[:, None] - p0,
                                z[:, None], eps_prune)
    return (ev0 + ev1).min(axis=1)


def _global_value(u: np.ndarray, k: int, n: int, table: _UtilityTable,
                  eps_prune: float) -> float:
    """Backward-induction value G(u, k): mass times the minimal expected
    posterior variance achievable with n - k more measurements."""
    if k == n - 1:
        return float(_one_step_values(u[None, :], table, eps_prune)[0])
    z = float(u.sum())
    v0 = table.like0 * u
    v1 = u - v0
    z0 = v0.sum(axis=1)
    z1 = z - z0
    values = np.zeros((2, table.times.size))
    if k == n - 2:
        values[0] = _one_step_values(v0, table, eps_prune)
        values[1] = _one_step_values(v1, table, eps_prune)
    else:
        for j in range(table.times.size):
            if z0[j] > 0.0 and z0[j] >= eps_prune * z:
                values[0, j] = _global_value(v0[j], k + 1, n, table, eps_prune)
            if z1[j] > 0.0 and z1[j] >= eps_prune * z:
                values[1, j] = _global_value(v1[j], k + 1, n, table, eps_prune)
        return float(values.sum(axis=0).min())
    keep0 = (z0 > 0.0) & (z0 >= eps_prune * z)
    keep1 = (z1 > 0.0) & (z1 >= eps_prune * z)
    totals = np.where(keep0, values[0], 0.0) + np.where(keep1, values[1], 0.0)
    return float(totals.min())


def exact_bayes_risk_global(prior: Distribution, model: LikelihoodModel,
                            n_measurements: int, time_grid=None, *,
                            domain: DesignDomain | None = None,
                            max_measurements: int = MAX_GLOBAL_MEASUREMENTS,
                            max_grid: int = MAX_GLOBAL_GRID,
                            eps_prune: float = EPS_PRUNE) -> float:
    """Exact Bayes risk of the globally optimal adaptive strategy whose
    times are drawn from a finite menu (``time_grid``, or the default menu
    over ``domain``)."""
    if n_measurements < 1:
        raise ValueError(f"n_measurements must be >= 1, got {n_measurements}")
    if n_measurements > max_measurements:
        raise TreeTooLarge(
            f"global optimization over {n_measurements} measurements exceeds the "
            f"cap of {max_measurements} (cost grows as (2*grid)^n)")
    if time_grid is None:
        time_grid = default_time_grid(domain)
    grid = np.asarray(time_grid, dtype=np.float64)
    if grid.ndim != 1 or grid.size < 1:
        raise ValueError("time_grid must be a non-empty 1-d array of times")
    if grid.size > max_grid:
        raise TreeTooLarge(
            f"time menu of {grid.size} entries exceeds the cap of {max_grid}")
    if not np.all(grid >= 0.0):
        raise ValueError("candidate times must be >= 0")
    if grid.size > 1 and not np.all(np.diff(grid) > 0.0):
        raise ValueError("time_grid must be strictly increasing")
    table = _UtilityTable.for_distribution(model, prior, grid)
    return _global_value(prior.weights, 0, n_measurements, table, eps_prune)


def _curve(strategy: str, model: LikelihoodModel, risks, notes: str) -> RiskCurve:
    entries = tuple((n + 1, float(r)) for n, r in enumerate(risks))
    return RiskCurve(strategy=strategy, model=model.describe(), entries=entries, notes=notes)


def risk_curve(strategy: str, prior: Distribution, model: LikelihoodModel,
               n_max: int, *, domain: DesignDomain | None = None, time_grid=None,
               eps_prune: float = EPS_PRUNE) -> RiskCurve:
    """Bayes risk at every n = 1..n_max for one named strategy.

    Strategies: ``greedy-negvar`` and ``greedy-infogain`` (adaptive greedy
    over the continuous domain), ``nyquist-bayes`` (the fixed comb
    t_k = k*pi/omega_max with Bayesian updating, omega_max taken from the
    prior support), and ``global`` (optimal adaptive strategy over a finite
    time menu).
    """
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    if domain is None:
        domain = DesignDomain()
    if strategy in ("greedy-negvar", "greedy-infogain"):
        utility = Utility.NEG_VARIANCE if strategy == "greedy-negvar" else Utility.INFO_GAIN
        if n_max > MAX_GREEDY_MEASUREMENTS:
            raise TreeTooLarge(
                f"greedy tree of depth {n_max} exceeds the cap of "
                f"{MAX_GREEDY_MEASUREMENTS}")
        risks = _greedy_depth_risks(prior, model, utility, n_max, domain,
                                    time_grid, eps_prune)
        notes = f"utility={utility.value}"
    elif strategy == "nyquist-bayes":
        omega_max = prior.support[1]
        if n_max > MAX_OFFLINE_MEASUREMENTS:
            raise TreeTooLarge(
                f"schedule of {n_max} measurements exceeds the cap of "
                f"{MAX_OFFLINE_MEASUREMENTS}")
        schedule = nyquist_schedule(n_max, omega_max)
        risks = _offline_depth_risks(schedule, prior, model, eps_prune)
        notes = f"omega_max={omega_max!r}"
    elif strategy == "global":
        if n_max > MAX_GLOBAL_MEASUREMENTS:
            raise TreeTooLarge(
                f"global optimization over {n_max} measurements exceeds the cap "
                f"of {MAX_GLOBAL_MEASUREMENTS}")
        if time_grid is None:
            time_grid = default_time_grid(domain)
        risks = [exact_bayes_risk_global(prior, model, n, time_grid,
                                         eps_prune=eps_prune)
                 for n in range(1, n_max + 1)]
        notes = f"time_grid_points={len(np.asarray(time_grid))}"
    else:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    return _curve(strategy, model, risks, notes)
