"""Game state machine: shots, eliminations, and aiming-clock resets.

Rules enforced here:
  1. a shot happens at a global time and is judged by the shooter's
     curve at the local (aiming) time;
  2. a miss spends the shooter's bullet; with none left his curve drops
     to zero but he stays in the game as a target;
  3. a hit removes the target and every battlefield the target was in;
  4. after every shot all aiming clocks restart together, so local time
     is global time minus the time of the last shot;
  5. the game ends when one player is left or nobody can shoot.

States are immutable; apply_shot returns the successor state.
"""
from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping, NamedTuple

from .curves import SuccessCurve, evaluate, zeroed
from .gamespec import GameSpec
from .schedule import PairSchedule, build_schedule

OUTCOMES = ("hit", "miss")


@dataclass(frozen=True)
class ShotEvent:
    """One resolved shot, logged with both clocks and the hit chance."""

    shooter: int
    target: int
    time: float
    local_time: float
    p_hit: float
    outcome: str


class TerminalStatus(NamedTuple):
    terminal: bool
    reason: str | None


@dataclass(frozen=True)
class GameState:
    """Immutable game snapshot.

    pair_set always covers exactly the alive players; pairs in which
    neither side can still shoot sit at time +inf.
    """

    alive: frozenset[int]
    armed: frozenset[int]
    bullets: Mapping[int, int]
    curves: Mapping[int, SuccessCurve]
    pair_set: PairSchedule
    clock_origin: float
    global_time: float
    shot_log: tuple[ShotEvent, ...]
    tol: float


def new_state(spec: GameSpec) -> GameState:
    """Initial state: everyone alive and armed, clocks at zero."""
    curves = spec.curves()
    bullets = spec.bullets()
    return GameState(
        alive=frozenset(curves),
        armed=frozenset(curves),
        bullets=MappingProxyType(dict(bullets)),
        curves=MappingProxyType(dict(curves)),
        pair_set=build_schedule(curves, spec.tolerance),
        clock_origin=0.0,
        global_time=0.0,
        shot_log=(),
        tol=spec.tolerance,
    )


def local_time(state: GameState, global_t: float) -> float:
    """Aiming time elapsed since the last shot."""
    if global_t < state.clock_origin:
        raise ValueError("time precedes the current aiming window")
    return global_t - state.clock_origin


def apply_shot(
    state: GameState,
    shooter: int,
    target: int,
    outcome: str,
    at_time: float | None = None,
) -> GameState:
    """Resolve one shot with a forced outcome and return the next state.

    at_time defaults to the state's current global time; it may not run
    backwards.  The shooter must be alive and armed, the target alive
    and distinct.
    """
    if outcome not in OUTCOMES:
        raise ValueError(f"outcome must be one of {OUTCOMES}")
    if shooter not in state.alive:
        raise ValueError(f"shooter {shooter} is not alive")
    if shooter not in state.armed:
        raise ValueError(f"shooter {shooter} has no bullets")
    if target not in state.alive:
        raise ValueError(f"target {target} is not alive")
    if shooter == target:
        raise ValueError("shooter cannot target himself")
    t = state.global_time if at_time is None else float(at_time)
    if t < state.global_time:
        raise ValueError("shot time runs backwards")

    local = t - state.clock_origin
    p_hit = evaluate(state.curves[shooter], local)
    event = ShotEvent(
        shooter=shooter,
        target=target,
        time=t,
        local_time=local,
        p_hit=p_hit,
        outcome=outcome,
    )

    bullets = dict(state.bullets)
    curves = dict(state.curves)
    alive = set(state.alive)
    bullets[shooter] -= 1
    if bullets[shooter] == 0:
        curves[shooter] = zeroed(curves[shooter])
    if outcome == "hit":
        alive.discard(target)
        for table in (bullets, curves):
            del table[target]

    armed = frozenset(p for p in alive if bullets[p] > 0)
    if len(alive) >= 2:
        pair_set = build_schedule(curves, state.tol, dead_pairs="inf")
    else:
        pair_set = PairSchedule(n=len(alive), battlefields=())
    return GameState(
        alive=frozenset(alive),
        armed=armed,
        bullets=MappingProxyType(bullets),
        curves=MappingProxyType(curves),
        pair_set=pair_set,
        clock_origin=t,
        global_time=t,
        shot_log=state.shot_log + (event,),
        tol=state.tol,
    )


def is_terminal(state: GameState) -> TerminalStatus:
    """Whether play can continue, and why not.

    A lone survivor ends the game even if he still holds bullets; with
    two or more alive the game ends only when no one is armed.
    """
    if len(state.alive) <= 1:
        return TerminalStatus(True, "lone-survivor")
    if not state.armed:
        return TerminalStatus(True, "bullets-exhausted")
    return TerminalStatus(False, None)
