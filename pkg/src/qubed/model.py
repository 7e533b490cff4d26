"""Two-outcome measurement likelihoods for a precessing qubit.

A qubit prepared on the equator of the Bloch sphere precesses at an unknown
frequency ``omega``; after evolving for a controllable time ``t`` it is
measured along its preparation axis, giving outcome 0 or 1.  The ideal
likelihood is

    p(0 | omega, t) = cos^2(omega t / 2) = 1/2 + 1/2 cos(omega t)

and the noisy variant damps the oscillating contrast by a visibility factor
and an exponential decay envelope:

    p(0 | omega, t) = 1/2 + (visibility / 2) exp(-t / t2) cos(omega t).

Outcome 1 is always the exact floating-point complement ``1 - p(0)``.
All functions here are pure; design-space bounds on ``t`` live elsewhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["IDEAL", "NOISY", "LikelihoodModel", "Experiment", "outcome_probability"]

IDEAL = "ideal"
NOISY = "noisy"


@dataclass(frozen=True)
class LikelihoodModel:
    """Measurement model parameters.

    ``visibility`` and ``t2`` only take effect for the noisy kind; the ideal
    kind is exactly visibility 1 with no decay.
    """

    kind: str = IDEAL
    visibility: float = 1.0
    t2: float = math.inf

    def __post_init__(self):
        if self.kind not in (IDEAL, NOISY):
            raise ValueError(f"unknown model kind {self.kind!r}")
        if not 0.0 <= self.visibility <= 1.0:
            raise ValueError(f"visibility must be in [0, 1], got {self.visibility}")
        if not self.t2 > 0.0:
            raise ValueError(f"t2 must be positive, got {self.t2}")

    @classmethod
    def ideal(cls) -> "LikelihoodModel":
        return cls(kind=IDEAL)

    @classmethod
    def noisy(cls, visibility: float, t2: float) -> "LikelihoodModel":
        return cls(kind=NOISY, visibility=visibility, t2=t2)

    def describe(self) -> str:
        """Stable textual form used in CSV output."""
        if self.kind == IDEAL:
            return IDEAL
        return f"noisy(visibility={self.visibility!r},t2={self.t2!r})"


@dataclass(frozen=True)
class Experiment:
    """A single design choice: the evolution time before measurement."""

    time: float

    def __post_init__(self):
        if not self.time >= 0.0:
            raise ValueError(f"evolution time must be >= 0, got {self.time}")


def outcome_probability(model: LikelihoodModel, omega, t, d: int):
    """Probability of outcome ``d`` after evolving at frequency ``omega`` for time ``t``.

    ``omega`` and ``t`` may be scalars or broadcastable arrays; the result has
    the broadcast shape.  ``d = 1`` is computed as ``1 - p(0)`` so the two
    branches sum to 1 bit-exactly.
    """
    if d not in (0, 1):
        raise ValueError(f"outcome must be 0 or 1, got {d!r}")
    t = np.asarray(t, dtype=np.float64)
    if np.any(t < 0.0):
        raise ValueError("evolution time must be >= 0")
    omega = np.asarray(omega, dtype=np.float64)
    if model.kind == IDEAL:
        p0 = 0.5 + 0.5 * np.cos(omega * t)
    else:
        envelope = model.visibility * np.exp(-t / model.t2)
        p0 = 0.5 + 0.5 * envelope * np.cos(omega * t)
    p = p0 if d == 0 else 1.0 - p0
    if p.ndim == 0:
        return float(p)
    return p
