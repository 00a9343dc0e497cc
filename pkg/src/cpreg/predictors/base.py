"""Common interface of the on-line predictors.

Each predictor separates a step into two phases enforcing the on-line
protocol's information flow:

1. ``begin_step(x_new)`` sees only the new feature vector and returns a
   step context holding everything expensive (factorizations, critical
   points, Monte-Carlo draws).
2. ``raw_region(ctx, eps, tau)`` and ``pvalue(ctx, y, tau)`` read the
   context; the true response enters only through ``pvalue`` and the
   subsequent ``observe``.

``tau`` is the smoothing draw of the step: pass 1.0 for the deterministic
variant, a fresh uniform draw for the smoothed one.  One tau serves every
significance level of the step.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Any

import numpy as np

from ..regions import PredictionRegion
from ..stream import Observation


class OnlinePredictor(ABC):
    """Stateful on-line predictor over a stream of observations."""

    @property
    @abstractmethod
    def count(self) -> int:
        """Number of observations absorbed so far."""

    @abstractmethod
    def begin_step(self, x_new: np.ndarray) -> Any:
        """Prepare the step for a new feature vector (response unseen)."""

    @abstractmethod
    def raw_region(self, ctx: Any, eps: float, tau: float) -> PredictionRegion:
        """Prediction region {y : p(y) > eps} before any hulling."""

    @abstractmethod
    def pvalue(self, ctx: Any, y: float, tau: float) -> float:
        """Realized p-value of a candidate response."""

    @abstractmethod
    def observe(self, obs: Observation) -> None:
        """Absorb one observation into the state."""

    def region(self, ctx: Any, eps: float, tau: float, hull: bool = True) -> PredictionRegion:
        """Region as reported in the ledger (convex hull by default)."""
        raw = self.raw_region(ctx, eps, tau)
        return raw.convex_hull() if hull else raw


def check_epsilon(eps: float) -> float:
    eps = float(eps)
    if not 0.0 < eps < 1.0:
        raise ValueError(f"significance level must lie in (0, 1), got {eps}")
    return eps


def check_tau(tau: float) -> float:
    tau = float(tau)
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"smoothing draw must lie in [0, 1], got {tau}")
    return tau
