"""Exchangeability-based predictor with ridge-residual nonconformity.

At step n every observation's ridge residual is an affine function of the
candidate response y, so the nonconformity comparison pattern can change
only where some |e_i(y)| crosses |e_n(y)|, i.e. where e_i(y) = +-e_n(y).
The region {y : p(y) > eps} is assembled by sweeping those critical
points: the p-value is constant on each open interval between them, so
one probe per interval (plus one per critical point) determines the
region exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from ..regions import Interval, PredictionRegion, point
from ..residuals import AffineResiduals, FeatureSchedule, ridge_residual_affine
from ..stream import Observation
from .base import OnlinePredictor, check_epsilon, check_tau

# Two residual lines closer in slope than this never cross.
PARALLEL_TOL = 1e-12
# Critical points closer than this collapse into one.
MERGE_TOL = 1e-12
# Relative tolerance for recognizing score ties at a critical point,
# where exact ties are structurally expected but float noise perturbs them.
TIE_RTOL = 1e-9


def iid_pvalue(scores, tau: float) -> float:
    """p-value of the last score among all of them.

    ``p = (#{a_i > a_n} + tau * #{a_i = a_n}) / n`` with i running over
    all n scores (the last one always ties itself).
    """
    check_tau(tau)
    arr = np.asarray(scores, dtype=float)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("scores must be a nonempty 1-D sequence")
    last = arr[-1]
    greater = int(np.sum(arr > last))
    ties = int(np.sum(arr == last))
    return (greater + tau * ties) / arr.size


def critical_points(residuals: AffineResiduals) -> NDArray[np.float64]:
    """Sorted, deduplicated solutions of e_i(y) = +-e_n(y) over i < n."""
    b, c = residuals.slopes, residuals.intercepts
    bn, cn = b[-1], c[-1]
    points = []
    for sign in (1.0, -1.0):
        denom = b[:-1] - sign * bn
        keep = np.abs(denom) >= PARALLEL_TOL
        if np.any(keep):
            points.append((sign * cn - c[:-1][keep]) / denom[keep])
    if not points:
        return np.empty(0)
    merged: list[float] = []
    for t in np.sort(np.concatenate(points)):
        if not merged or t - merged[-1] > MERGE_TOL:
            merged.append(float(t))
    return np.asarray(merged)


@dataclass
class IidStepContext:
    n: int
    residuals: AffineResiduals
    # Sweep tables, filled on first region request (a p-value at the realized
    # response never needs them).
    crit: NDArray[np.float64] | None = None
    greater: NDArray[np.int64] | None = None
    ties: NDArray[np.int64] | None = None

    def sweep(self) -> None:
        """Probe the score comparison on every piece of the critical grid.

        Probe layout: [left ray, crit_0, mid_01, crit_1, ..., crit_last,
        right ray], or a single probe when there are no critical points.
        """
        if self.crit is not None:
            return
        crit = critical_points(self.residuals)
        if crit.size == 0:
            probes = np.zeros(1)
            at_crit = np.zeros(1, dtype=bool)
        else:
            probes = np.empty(2 * crit.size + 1)
            probes[0] = crit[0] - 1.0
            probes[1::2] = crit
            probes[2:-1:2] = 0.5 * (crit[:-1] + crit[1:])
            probes[-1] = crit[-1] + 1.0
            at_crit = np.zeros(probes.size, dtype=bool)
            at_crit[1::2] = True
        scores = np.abs(
            self.residuals.intercepts[:, None] + self.residuals.slopes[:, None] * probes[None, :]
        )
        own = scores[-1]
        rest = scores[:-1]
        tol = np.where(at_crit, TIE_RTOL * np.maximum(1.0, own), 0.0)
        self.crit = crit
        self.greater = np.sum(rest > own + tol, axis=0)
        self.ties = np.sum(np.abs(rest - own) <= tol, axis=0) + 1


class IidPredictor(OnlinePredictor):
    """On-line conformal predictor under the exchangeability model."""

    def __init__(self, schedule: FeatureSchedule | None = None):
        self.schedule = schedule or FeatureSchedule()
        self._x: list[np.ndarray] = []
        self._y: list[float] = []

    @property
    def count(self) -> int:
        return len(self._y)

    def begin_step(self, x_new) -> IidStepContext:
        x_new = np.asarray(x_new, dtype=float)
        residuals = ridge_residual_affine(
            np.array(self._x) if self._x else np.empty((0, x_new.size)),
            np.asarray(self._y, dtype=float),
            x_new,
            self.schedule,
        )
        return IidStepContext(n=len(self._y) + 1, residuals=residuals)

    def raw_region(self, ctx: IidStepContext, eps: float, tau: float) -> PredictionRegion:
        check_epsilon(eps)
        check_tau(tau)
        ctx.sweep()
        keep = (ctx.greater + tau * ctx.ties) / ctx.n > eps
        crit = ctx.crit
        if crit.size == 0:
            return PredictionRegion.real_line() if keep[0] else PredictionRegion.empty()
        pieces: list[Interval] = []
        if keep[0]:
            pieces.append(Interval(-np.inf, crit[0], False, False))
        for j, t in enumerate(crit):
            if keep[1 + 2 * j]:
                pieces.append(point(t))
            if j + 1 < crit.size and keep[2 + 2 * j]:
                pieces.append(Interval(t, crit[j + 1], False, False))
        if keep[-1]:
            pieces.append(Interval(crit[-1], np.inf, False, False))
        return PredictionRegion(pieces)

    def pvalue(self, ctx: IidStepContext, y: float, tau: float) -> float:
        return iid_pvalue(np.abs(ctx.residuals.at(float(y))), tau)

    def observe(self, obs: Observation) -> None:
        if self._x and obs.x.shape != self._x[0].shape:
            raise ValueError(
                f"observation has {obs.x.shape[0]} features, expected {self._x[0].shape[0]}"
            )
        self._x.append(obs.x)
        self._y.append(obs.y)
