"""Pairwise engagement times and the sorted battlefield schedule.

Each unordered pair of players meets at the first time their success
curves sum to 1; sorting those times over all pairs yields the global
schedule.  Every player appears in exactly n-1 battlefields.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

from .curves import SuccessCurve, evaluate


@dataclass(frozen=True)
class Battlefield:
    """One scheduled engagement: 1-based rank, sorted player pair, time."""

    index: int
    pair: tuple[int, int]
    time: float


@dataclass(frozen=True)
class PairSchedule:
    """All battlefields sorted by (time, pair)."""

    n: int
    battlefields: tuple[Battlefield, ...]

    def __iter__(self):
        return iter(self.battlefields)

    def __len__(self) -> int:
        return len(self.battlefields)


def pairwise_time(
    curve_i: SuccessCurve, curve_j: SuccessCurve, tol: float = 1e-9
) -> float:
    """First t with P_i(t) + P_j(t) >= 1, by bisection to within tol.

    Returns the upper endpoint of the final bracket so the crossing
    condition holds exactly at the returned time.  Raises if neither
    player can ever hit (two zero curves never cross).
    """
    if tol <= 0:
        raise ValueError("tol must be > 0")
    return _pairwise_time_cached(curve_i, curve_j, tol)


@lru_cache(maxsize=4096)
def _pairwise_time_cached(
    curve_i: SuccessCurve, curve_j: SuccessCurve, tol: float
) -> float:
    horizons = [c.t_max for c in (curve_i, curve_j) if c.kind != "zero"]
    if not horizons:
        raise ValueError("pair of spent shooters never crosses")
    hi = min(horizons)

    def total(t: float) -> float:
        return evaluate(curve_i, t) + evaluate(curve_j, t)

    if total(0.0) >= 1.0:
        return 0.0
    # total(hi) >= 1 because some curve saturates there
    lo = 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if total(mid) >= 1.0:
            hi = mid
        else:
            lo = mid
    return hi


def build_schedule(
    curves: Mapping[int, SuccessCurve],
    tol: float = 1e-9,
    *,
    dead_pairs: str = "error",
) -> PairSchedule:
    """Sorted schedule over all C(n, 2) pairs of the given players.

    Ties in time fall back to lexicographic pair order.  dead_pairs
    selects what happens for a pair of two spent shooters: "error"
    raises, "inf" schedules the pair at +inf (used while replaying a
    game whose shooters have all fired).
    """
    if dead_pairs not in ("error", "inf"):
        raise ValueError("dead_pairs must be 'error' or 'inf'")
    ids = sorted(curves)
    if len(ids) < 2:
        raise ValueError("need at least two players")
    entries = []
    for a_pos, i in enumerate(ids):
        for j in ids[a_pos + 1 :]:
            try:
                t = pairwise_time(curves[i], curves[j], tol)
            except ValueError:
                if dead_pairs == "error":
                    raise
                t = math.inf
            entries.append((t, (i, j)))
    entries.sort(key=lambda e: (e[0], e[1]))
    fields = tuple(
        Battlefield(index=m, pair=pair, time=t)
        for m, (t, pair) in enumerate(entries, start=1)
    )
    return PairSchedule(n=len(ids), battlefields=fields)


def player_schedule(schedule: PairSchedule, player: int) -> list[Battlefield]:
    """The player's n-1 battlefields in global schedule order."""
    mine = [bf for bf in schedule.battlefields if player in bf.pair]
    if not mine:
        raise ValueError(f"player {player} is not in the schedule")
    return mine
