"""Battlefield scoring and target selection.

For a battlefield at rank m in the schedule, a shooter's chance of
eliminating the opponent discounts the opponent's survival through every
earlier battlefield the opponent takes part in.  The ratio of the two
directed chances scores the battlefield; a player picks the best score
among his n-1 battlefields.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .curves import SuccessCurve, evaluate
from .schedule import PairSchedule, player_schedule

OBJECTIVES = ("max_q", "min_q")


@dataclass(frozen=True)
class BattlefieldScore:
    """Directed view of one battlefield from the shooter's side."""

    m: int
    shooter: int
    opponent: int
    time: float
    p_shoot: float
    q: float


@dataclass(frozen=True)
class TargetPlan:
    """Chosen battlefield rank, opponent, and planned local firing time."""

    m_star: int
    target: int
    t_star: float


def success_prob(
    schedule: PairSchedule,
    curves: Mapping[int, SuccessCurve],
    shooter: int,
    m: int,
) -> float:
    """Directed elimination chance for the shooter at battlefield m.

    Equals 1 - P_j(t_m) * prod over earlier battlefields h < m that
    involve the opponent j of P_j(t_h): the opponent must fail to land
    his shot at every stage where he is engaged up to and including m.
    """
    if not 1 <= m <= len(schedule.battlefields):
        raise ValueError(f"battlefield {m} is out of range")
    bf = schedule.battlefields[m - 1]
    if shooter not in bf.pair:
        raise ValueError(f"player {shooter} is not in battlefield {m}")
    opponent = bf.pair[0] if bf.pair[1] == shooter else bf.pair[1]
    surv = _opponent_failure(schedule, curves, opponent, m)
    return 1.0 - surv


def _opponent_failure(schedule, curves, opponent, m):
    # evaluate() saturates at t_max, so +inf battlefield times are safe
    bf = schedule.battlefields[m - 1]
    out = evaluate(curves[opponent], bf.time)
    for earlier in schedule.battlefields[: m - 1]:
        if opponent in earlier.pair:
            out *= evaluate(curves[opponent], earlier.time)
    return out


def indicator(
    schedule: PairSchedule,
    curves: Mapping[int, SuccessCurve],
    shooter: int,
    m: int,
) -> float:
    """Advantage ratio q = P(shooter wins m) / P(opponent wins m).

    Reciprocal for the two sides of one battlefield.  A zero denominator
    means unbounded advantage and yields +inf; 0/0 yields nan.
    """
    p_fwd = success_prob(schedule, curves, shooter, m)
    bf = schedule.battlefields[m - 1]
    opponent = bf.pair[0] if bf.pair[1] == shooter else bf.pair[1]
    p_rev = success_prob(schedule, curves, opponent, m)
    if p_rev > 0.0:
        return p_fwd / p_rev
    return math.inf if p_fwd > 0.0 else math.nan


def battlefield_scores(
    schedule: PairSchedule,
    curves: Mapping[int, SuccessCurve],
    shooter: int,
) -> list[BattlefieldScore]:
    """Scores for every battlefield of the shooter, in schedule order."""
    out = []
    for bf in player_schedule(schedule, shooter):
        opponent = bf.pair[0] if bf.pair[1] == shooter else bf.pair[1]
        out.append(
            BattlefieldScore(
                m=bf.index,
                shooter=shooter,
                opponent=opponent,
                time=bf.time,
                p_shoot=success_prob(schedule, curves, shooter, bf.index),
                q=indicator(schedule, curves, shooter, bf.index),
            )
        )
    return out


def best_battlefield(
    schedule: PairSchedule,
    curves: Mapping[int, SuccessCurve],
    shooter: int,
    objective: str = "max_q",
) -> TargetPlan:
    """Best-scoring battlefield for the shooter; earliest rank wins ties.

    objective "max_q" prefers the largest advantage ratio, "min_q" the
    smallest (the cautious variant).
    """
    if objective not in OBJECTIVES:
        raise ValueError(f"objective must be one of {OBJECTIVES}")
    best: BattlefieldScore | None = None
    for score in battlefield_scores(schedule, curves, shooter):
        if math.isnan(score.q):
            continue
        if best is None:
            best = score
        elif objective == "max_q" and score.q > best.q:
            best = score
        elif objective == "min_q" and score.q < best.q:
            best = score
    if best is None:
        raise ValueError(f"player {shooter} has no scorable battlefield")
    return TargetPlan(m_star=best.m, target=best.opponent, t_star=best.time)


def multi_bullet_battlefields(
    schedule: PairSchedule,
    curves: Mapping[int, SuccessCurve],
    shooter: int,
    bullets: int,
    objective: str = "max_q",
) -> list[TargetPlan]:
    """Top battlefields for a shooter with several bullets.

    Returns min(bullets, n-1) plans ordered from best to worst score;
    ties keep schedule order.
    """
    if objective not in OBJECTIVES:
        raise ValueError(f"objective must be one of {OBJECTIVES}")
    if bullets < 1:
        raise ValueError("bullets must be >= 1")
    scores = battlefield_scores(schedule, curves, shooter)
    sign = -1.0 if objective == "max_q" else 1.0

    def rank(s: BattlefieldScore):
        # nan never outranks a real score
        return (math.isnan(s.q), sign * s.q if not math.isnan(s.q) else 0.0, s.m)

    ordered = sorted(scores, key=rank)
    take = min(bullets, len(ordered))
    return [
        TargetPlan(m_star=s.m, target=s.opponent, t_star=s.time)
        for s in ordered[:take]
    ]
