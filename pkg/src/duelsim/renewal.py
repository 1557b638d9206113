"""Renewal decision epochs and first-crossing (exit) statistics.

A player's chances to act arrive at the partial sums of i.i.d. positive
interarrival draws.  Given a time threshold t, the exit index nu is the
first epoch at or past t; the epoch before it is the last chance to act
early.  This module provides the interarrival laws, exact formulas for
the exponential law, Monte Carlo estimates for the rest, a discounted
win functional over two players' exits, and the shoot-early/shoot-late
recommendation built on it.

Monte Carlo routines derive one PCG64 substream per sampling pass from
the caller's seed, so results are reproducible bit for bit regardless of
backend chunking.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from . import _exitpy
from .curves import SuccessCurve, evaluate_many

try:
    from . import _exitcore
except ImportError:  # extension not built; numpy fallback still works
    _exitcore = None

if _exitcore is None or os.environ.get("DUELSIM_PURE"):
    _kernel = _exitpy
else:
    _kernel = _exitcore

LAWS = ("exponential", "deterministic", "uniform", "gamma")

_LAW_IDS = {
    "exponential": _exitpy.LAW_EXPONENTIAL,
    "uniform": _exitpy.LAW_UNIFORM,
    "gamma": _exitpy.LAW_GAMMA,
}


def backend() -> str:
    """Name of the sampling backend selected at import time."""
    return "compiled" if _kernel.IS_COMPILED else "pure-python"


@dataclass(frozen=True)
class RenewalProcess:
    """Interarrival law of one player's decision epochs.

    Use the classmethod constructors; they validate parameters.  The
    deterministic law places epochs on the exact lattice k * period.
    """

    law: str
    p0: float
    p1: float = 0.0

    @classmethod
    def exponential(cls, rate: float) -> "RenewalProcess":
        _require_positive("rate", rate)
        return cls("exponential", float(rate))

    @classmethod
    def deterministic(cls, period: float) -> "RenewalProcess":
        _require_positive("period", period)
        return cls("deterministic", float(period))

    @classmethod
    def uniform(cls, lo: float, hi: float) -> "RenewalProcess":
        _require_positive("lo", lo)
        if not (math.isfinite(hi) and hi > lo):
            raise ValueError("uniform law needs hi > lo")
        return cls("uniform", float(lo), float(hi))

    @classmethod
    def gamma(cls, shape: float, scale: float) -> "RenewalProcess":
        _require_positive("shape", shape)
        _require_positive("scale", scale)
        return cls("gamma", float(shape), float(scale))

    def mean(self) -> float:
        if self.law == "exponential":
            return 1.0 / self.p0
        if self.law == "deterministic":
            return self.p0
        if self.law == "uniform":
            return 0.5 * (self.p0 + self.p1)
        return self.p0 * self.p1

    def lst(self, theta: float) -> float:
        """Laplace transform E[exp(-theta * interarrival)], theta >= 0."""
        if theta < 0 or math.isnan(theta):
            raise ValueError("theta must be >= 0")
        if theta == 0.0:
            return 1.0
        if self.law == "exponential":
            return self.p0 / (self.p0 + theta)
        if self.law == "deterministic":
            return math.exp(-theta * self.p0)
        if self.law == "uniform":
            lo, hi = self.p0, self.p1
            return (math.exp(-theta * lo) - math.exp(-theta * hi)) / (
                theta * (hi - lo)
            )
        return (1.0 + theta * self.p1) ** (-self.p0)

    def draw(self, rng: np.random.Generator) -> float:
        """One interarrival variate; matches the batched kernels exactly."""
        if self.law == "exponential":
            return rng.standard_exponential() / self.p0
        if self.law == "deterministic":
            return self.p0
        if self.law == "uniform":
            return rng.uniform(self.p0, self.p1)
        return rng.standard_gamma(self.p0) * self.p1


def _require_positive(name: str, value: float) -> None:
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise ValueError(f"{name} must be finite and > 0")


class ExitSample(NamedTuple):
    """One first-crossing draw: epoch count, last epoch before, crossing epoch."""

    nu: int
    t_pre: float
    t_exit: float


@dataclass(frozen=True)
class ExitStats:
    """Exit-time summary; stderrs are zero for closed-form results.

    nu_approx is the ceiling shortcut round(up)(mean_exit / mean
    interarrival), reported next to the exact mean epoch count; it is an
    approximation and can differ from mean_nu by up to one iteration.
    """

    mean_exit: float
    mean_pre_exit: float
    mean_nu: float
    stderr_exit: float
    stderr_pre_exit: float
    stderr_nu: float
    n_samples: int
    nu_approx: int


def exit_stats_exponential(rate: float, threshold: float) -> ExitStats:
    """Exact exit statistics for the exponential law.

    Memorylessness gives E[T_nu] = t + 1/rate, and the age integral gives
    E[T_(nu-1)] = t - (1 - exp(-rate t)) / rate, E[nu] = 1 + rate * t.
    """
    _require_positive("rate", rate)
    _require_positive("threshold", threshold)
    mean_exit = threshold + 1.0 / rate
    mean_pre = threshold - (-math.expm1(-rate * threshold)) / rate
    mean_nu = 1.0 + rate * threshold
    return ExitStats(
        mean_exit=mean_exit,
        mean_pre_exit=mean_pre,
        mean_nu=mean_nu,
        stderr_exit=0.0,
        stderr_pre_exit=0.0,
        stderr_nu=0.0,
        n_samples=0,
        nu_approx=math.ceil(mean_exit * rate),
    )


def sample_exit(
    process: RenewalProcess, threshold: float, rng: np.random.Generator
) -> ExitSample:
    """One exit draw from the caller's generator, one variate at a time."""
    _require_positive("threshold", threshold)
    if process.law == "deterministic":
        k = _deterministic_nu(process.p0, threshold)
        return ExitSample(k, (k - 1) * process.p0, k * process.p0)
    t = 0.0
    prev = 0.0
    k = 0
    while t < threshold:
        prev = t
        t += process.draw(rng)
        k += 1
    return ExitSample(k, prev, t)


def _deterministic_nu(period: float, threshold: float) -> int:
    # smallest k with k * period >= threshold, robust to fp division
    k = max(1, math.floor(threshold / period))
    while k * period < threshold:
        k += 1
    while k > 1 and (k - 1) * period >= threshold:
        k -= 1
    return k


def _substream(seed: int, index: int) -> np.random.PCG64:
    return np.random.PCG64(np.random.SeedSequence((seed, index)))


def exit_time_samples(
    process: RenewalProcess,
    threshold: float,
    n_samples: int,
    seed: int = 0,
    stream: int = 0,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Batched exit draws (nu, t_pre, t_exit) on substream (seed, stream)."""
    _require_positive("threshold", threshold)
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    if process.law == "deterministic":
        k = _deterministic_nu(process.p0, threshold)
        nu = np.full(n_samples, k, dtype=np.int64)
        return nu, np.full(n_samples, (k - 1) * process.p0), np.full(
            n_samples, k * process.p0
        )
    law = _LAW_IDS[process.law]
    return _kernel.exit_batch(
        law, process.p0, process.p1, threshold, n_samples, _substream(seed, stream)
    )


def mc_exit_stats(
    process: RenewalProcess, threshold: float, n_samples: int, seed: int = 0
) -> ExitStats:
    """Monte Carlo exit statistics with standard errors of the means."""
    nu, pre, exi = exit_time_samples(process, threshold, n_samples, seed)
    return ExitStats(
        mean_exit=float(exi.mean()),
        mean_pre_exit=float(pre.mean()),
        mean_nu=float(nu.mean()),
        stderr_exit=_stderr(exi),
        stderr_pre_exit=_stderr(pre),
        stderr_nu=_stderr(nu),
        n_samples=n_samples,
        nu_approx=math.ceil(float(exi.mean()) / process.mean()),
    )


def _stderr(x: np.ndarray) -> float:
    if x.size < 2:
        return 0.0
    return float(x.std(ddof=1) / math.sqrt(x.size))


def mc_functional(
    process_i: RenewalProcess,
    process_j: RenewalProcess,
    threshold: float,
    theta0: float,
    theta1: float,
    n_samples: int,
    seed: int = 0,
) -> float:
    """E[exp(-theta0 T_pre^i - theta1 T_exit^i) ind(T_exit^i <= T_exit^j)].

    Both players face the same threshold; the indicator marks player i
    exiting no later than player j.  Negative theta values are accepted
    so a central finite difference at zero can recover the confined
    expected exit time; the same seed reuses the same sample paths.
    """
    for theta in (theta0, theta1):
        if not math.isfinite(theta):
            raise ValueError("theta must be finite")
    _, pre_i, exi_i = exit_time_samples(process_i, threshold, n_samples, seed, 0)
    _, _, exi_j = exit_time_samples(process_j, threshold, n_samples, seed, 1)
    w = np.exp(-theta0 * pre_i - theta1 * exi_i) * (exi_i <= exi_j)
    return float(w.mean())


@dataclass(frozen=True)
class ShotPlan:
    """Shoot-early/shoot-late recommendation for one battlefield.

    epoch is "nu" (fire at the first epoch past the planned time) or
    "nu-1" (fire at the last epoch before it); est_time is the matching
    mean firing time.  The hit-chance means behind the choice and the
    opponent's mean exit time are reported for context.
    """

    epoch: str
    est_time: float
    p_at_pre_exit: float
    p_at_exit: float
    opponent_mean_exit: float


def recommend_shot(
    process_i: RenewalProcess,
    process_j: RenewalProcess,
    curve_i: SuccessCurve,
    threshold: float,
    n_samples: int,
    seed: int = 0,
) -> ShotPlan:
    """Compare mean hit chances at the epochs bracketing the plan time.

    Estimates E[P_i(T_(nu-1))] and E[P_i(T_nu)] by Monte Carlo with the
    curve saturating past its horizon.  Waiting for the crossing epoch is
    recommended only when it strictly improves the mean hit chance;
    otherwise firing one epoch early is at least as good and faster.
    """
    _, pre_i, exi_i = exit_time_samples(process_i, threshold, n_samples, seed, 0)
    _, _, exi_j = exit_time_samples(process_j, threshold, n_samples, seed, 1)
    p_pre = float(evaluate_many(curve_i, pre_i).mean())
    p_exit = float(evaluate_many(curve_i, exi_i).mean())
    if p_pre < p_exit:
        return ShotPlan("nu", float(exi_i.mean()), p_pre, p_exit, float(exi_j.mean()))
    return ShotPlan("nu-1", float(pre_i.mean()), p_pre, p_exit, float(exi_j.mean()))


@lru_cache(maxsize=1024)
def _recommend_cached(
    process_i: RenewalProcess,
    process_j: RenewalProcess,
    curve_i: SuccessCurve,
    threshold: float,
    n_samples: int,
    seed: int,
) -> ShotPlan:
    return recommend_shot(process_i, process_j, curve_i, threshold, n_samples, seed)
