"""Monotone success-probability curves.

A curve gives the probability that a shot fired after aiming for a local
time t hits its target.  Curves are nondecreasing, start at P(0) >= 0 and
reach exactly 1 at their horizon t_max.  The "zero" kind models a player
who has spent his bullets and can no longer hit anything.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

KINDS = ("linear", "power", "expsat", "table", "zero")

# slack allowed when validating that a table curve reaches 1 at t_max
NORMALIZATION_TOL = 1e-12


@dataclass(frozen=True)
class SuccessCurve:
    """Hit probability as a function of aiming time.

    Instances are immutable and hashable so they can key caches.  Use
    :func:`make_curve` instead of constructing directly; it validates the
    parameters for each kind.
    """

    kind: str
    t_max: float
    k: float = 0.0
    rate: float = 0.0
    knots: tuple[tuple[float, float], ...] = field(default=())

    def __call__(self, t: float) -> float:
        return evaluate(self, t)


def make_curve(
    kind: str,
    t_max: float,
    *,
    k: float | None = None,
    rate: float | None = None,
    knots=None,
) -> SuccessCurve:
    """Build a validated curve of the given kind.

    linear:  P(t) = t / t_max
    power:   P(t) = (t / t_max) ** k, k > 0
    expsat:  P(t) = (1 - exp(-rate t)) / (1 - exp(-rate t_max)), rate > 0
    table:   piecewise-linear through (time, prob) knots ending at (t_max, 1)
    zero:    P(t) = 0 everywhere (spent shooter)
    """
    if kind not in KINDS:
        raise ValueError(f"unknown curve kind {kind!r}")
    if not (isinstance(t_max, (int, float)) and math.isfinite(t_max) and t_max > 0):
        raise ValueError("t_max must be finite and > 0")
    t_max = float(t_max)

    if kind == "linear":
        return SuccessCurve("linear", t_max)
    if kind == "zero":
        return SuccessCurve("zero", t_max)
    if kind == "power":
        if k is None or not (math.isfinite(k) and k > 0):
            raise ValueError("power curve needs exponent k > 0")
        return SuccessCurve("power", t_max, k=float(k))
    if kind == "expsat":
        if rate is None or not (math.isfinite(rate) and rate > 0):
            raise ValueError("expsat curve needs rate > 0")
        return SuccessCurve("expsat", t_max, rate=float(rate))

    # table
    if not knots:
        raise ValueError("table curve needs a nonempty knot list")
    cleaned: list[tuple[float, float]] = []
    for idx, kn in enumerate(knots):
        try:
            t, p = kn
        except (TypeError, ValueError):
            raise ValueError(f"knot {idx} is not a (time, prob) pair") from None
        t, p = float(t), float(p)
        if not (math.isfinite(t) and math.isfinite(p)):
            raise ValueError(f"knot {idx} has a non-finite entry")
        if t < 0 or p < 0:
            raise ValueError(f"knot {idx} has a negative entry")
        cleaned.append((t, p))
    times = [t for t, _ in cleaned]
    probs = [p for _, p in cleaned]
    if any(b <= a for a, b in zip(times, times[1:])):
        raise ValueError("knot times must be strictly increasing")
    if any(b < a for a, b in zip(probs, probs[1:])):
        raise ValueError("knot probabilities must be nondecreasing")
    if abs(times[-1] - t_max) > NORMALIZATION_TOL:
        raise ValueError("last knot time must equal t_max")
    if abs(probs[-1] - 1.0) > NORMALIZATION_TOL:
        raise ValueError("last knot probability must equal 1 (strict normalization)")
    # snap the endpoint so evaluation is exactly normalized
    cleaned[-1] = (t_max, 1.0)
    cleaned = [(t, min(p, 1.0)) for t, p in cleaned]
    return SuccessCurve("table", t_max, knots=tuple(cleaned))


def evaluate(curve: SuccessCurve, t: float) -> float:
    """P(t) for a single time; t must be >= 0."""
    if t < 0 or math.isnan(t):
        raise ValueError("time must be >= 0")
    if curve.kind == "zero":
        return 0.0
    if t >= curve.t_max:
        return 1.0
    if curve.kind == "linear":
        return t / curve.t_max
    if curve.kind == "power":
        return (t / curve.t_max) ** curve.k
    if curve.kind == "expsat":
        return math.expm1(-curve.rate * t) / math.expm1(-curve.rate * curve.t_max)
    # table: interpolation agrees with evaluate_many by construction
    xs = [kn[0] for kn in curve.knots]
    ps = [kn[1] for kn in curve.knots]
    if t <= xs[0]:
        return ps[0]
    return float(np.interp(t, xs, ps))


def evaluate_many(curve: SuccessCurve, t: np.ndarray) -> np.ndarray:
    """Vectorized P(t) over an array of times >= 0."""
    t = np.asarray(t, dtype=np.float64)
    if t.size and (np.isnan(t).any() or (t < 0).any()):
        raise ValueError("times must be >= 0")
    if curve.kind == "zero":
        return np.zeros_like(t)
    tc = np.minimum(t, curve.t_max)
    if curve.kind == "linear":
        return tc / curve.t_max
    if curve.kind == "power":
        return (tc / curve.t_max) ** curve.k
    if curve.kind == "expsat":
        return np.expm1(-curve.rate * tc) / np.expm1(-curve.rate * curve.t_max)
    xs = [kn[0] for kn in curve.knots]
    ps = [kn[1] for kn in curve.knots]
    return np.interp(tc, xs, ps)


def find_level(curve: SuccessCurve, p: float, tol: float = 1e-9) -> float:
    """Smallest t with P(t) >= p, located by bisection to within tol.

    Returns the upper endpoint of the final bracket, so the returned t
    always satisfies P(t) >= p exactly.
    """
    if not (0.0 <= p <= 1.0):
        raise ValueError("level must lie in [0, 1]")
    if tol <= 0:
        raise ValueError("tol must be > 0")
    if curve.kind == "zero":
        if p == 0.0:
            return 0.0
        raise ValueError("zero curve never reaches a positive level")
    if evaluate(curve, 0.0) >= p:
        return 0.0
    lo, hi = 0.0, curve.t_max
    # invariant: P(lo) < p <= P(hi)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if evaluate(curve, mid) >= p:
            hi = mid
        else:
            lo = mid
    return hi


def zeroed(curve: SuccessCurve) -> SuccessCurve:
    """The curve of a shooter with no bullets left; keeps the horizon."""
    return SuccessCurve("zero", curve.t_max)
