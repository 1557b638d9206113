"""Shared builders for randomized test instances."""
from __future__ import annotations

import numpy as np

from duelsim import SuccessCurve, make_curve

KINDS = ("linear", "power", "expsat", "table")


def random_curve(rng: np.random.Generator, kind: str | None = None) -> SuccessCurve:
    if kind is None:
        kind = KINDS[rng.integers(len(KINDS))]
    t_max = float(rng.uniform(2.0, 60.0))
    if kind == "linear":
        return make_curve("linear", t_max)
    if kind == "power":
        return make_curve("power", t_max, k=float(rng.uniform(0.3, 4.0)))
    if kind == "expsat":
        return make_curve("expsat", t_max, rate=float(rng.uniform(0.02, 2.0)))
    inner = np.sort(rng.uniform(0.05 * t_max, 0.95 * t_max, rng.integers(1, 5)))
    keep = [0.0]
    for t in inner:
        if t - keep[-1] > 1e-6 * t_max:
            keep.append(float(t))
    probs = np.sort(rng.uniform(0.0, 1.0, len(keep)))
    knots = list(zip(keep, probs.tolist())) + [(t_max, 1.0)]
    return make_curve("table", t_max, knots=knots)


def random_curves(rng: np.random.Generator, n: int) -> dict[int, SuccessCurve]:
    return {pid: random_curve(rng) for pid in range(1, n + 1)}
