"""Monte Carlo playouts of full games under simple firing policies.

Between two shots the game state is frozen, so each armed player's first
epoch satisfying his firing rule is well defined; the playout loop jumps
straight from shot to shot by taking the earliest such epoch (ties go to
the smaller player id).  Epoch sequences are materialized lazily per
player from the playout's generator and are never reset by shots; only
the aiming clock restarts.

Policies:
  threshold  fire on the best battlefield at the first own epoch whose
             local time reaches the planned crossing time;
  versatile  like threshold, but when waiting for the crossing epoch
             does not improve the expected hit chance, fire at the last
             own epoch strictly before the planned time instead;
  naive_max  ignore the schedule timing and fire at the first own epoch
             past the shooter's own saturation horizon.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curves import evaluate
from .engine import GameState, ShotEvent, apply_shot, is_terminal, new_state
from .gamespec import GameSpec
from .renewal import RenewalProcess, _recommend_cached
from .targeting import OBJECTIVES, best_battlefield

POLICIES = ("threshold", "versatile", "naive_max")


@dataclass(frozen=True)
class Policy:
    """Firing policy shared by every player in a playout.

    rec_samples and rec_seed parametrize the versatile policy's internal
    shoot-early estimate; it runs on its own fixed stream so playout
    reproducibility never depends on cache state.
    """

    name: str = "threshold"
    objective: str = "max_q"
    rec_samples: int = 4096
    rec_seed: int = 0

    def __post_init__(self):
        if self.name not in POLICIES:
            raise ValueError(f"policy must be one of {POLICIES}")
        if self.objective not in OBJECTIVES:
            raise ValueError(f"objective must be one of {OBJECTIVES}")
        if self.rec_samples < 1:
            raise ValueError("rec_samples must be >= 1")


@dataclass(frozen=True)
class PlayoutResult:
    survivors: frozenset[int]
    shot_log: tuple[ShotEvent, ...]
    duration: float


@dataclass(frozen=True)
class Estimate:
    """Per-player survival and landed-hit rates over repeated playouts."""

    runs: int
    seed: int
    survival_rate: dict[int, float]
    survival_stderr: dict[int, float]
    hit_rate: dict[int, float]
    hit_stderr: dict[int, float]
    logs: tuple[tuple[ShotEvent, ...], ...] | None = None


class _EpochBuffer:
    """Lazily drawn epoch sequence T_1 < T_2 < ... for one player."""

    def __init__(self, process: RenewalProcess, rng: np.random.Generator):
        self.process = process
        self.rng = rng
        self.times = np.empty(0, dtype=np.float64)

    def extend_to(self, target: float) -> None:
        proc = self.process
        if proc.law == "deterministic":
            have = self.times.size
            need = max(int(math.ceil(target / proc.p0)) + 2, have + 4)
            if need > have:
                self.times = np.arange(1, need + 1, dtype=np.float64) * proc.p0
            return
        mean = proc.mean()
        while self.times.size == 0 or self.times[-1] < target:
            last = float(self.times[-1]) if self.times.size else 0.0
            m = max(8, int((target - last) / mean * 1.3) + 4)
            if proc.law == "exponential":
                x = self.rng.standard_exponential(m) / proc.p0
            elif proc.law == "uniform":
                x = self.rng.uniform(proc.p0, proc.p1, m)
            else:
                x = self.rng.standard_gamma(proc.p0, m) * proc.p1
            self.times = np.concatenate((self.times, last + np.cumsum(x)))

    def first_at_or_after(self, t: float) -> float:
        self.extend_to(t)
        idx = int(np.searchsorted(self.times, t, side="left"))
        return float(self.times[idx])

    def last_inside(self, lo: float, hi: float) -> float | None:
        """Largest epoch in (lo, hi), or None when the window is empty."""
        self.extend_to(hi)
        idx = int(np.searchsorted(self.times, hi, side="left")) - 1
        if idx >= 0 and self.times[idx] > lo:
            return float(self.times[idx])
        return None


def _plan_for(
    state: GameState,
    pid: int,
    policy: Policy,
    spec: GameSpec,
    cache: dict,
) -> tuple[float, int, str]:
    """(planned local firing time, target, epoch flavor) for one player."""
    spent = frozenset(p for p in state.alive if state.bullets[p] == 0)
    key = (state.alive, spent, pid, policy.name, policy.objective)
    hit = cache.get(key)
    if hit is not None:
        return hit
    plan = best_battlefield(state.pair_set, state.curves, pid, policy.objective)
    if policy.name == "naive_max":
        out = (state.curves[pid].t_max, plan.target, "nu")
    elif policy.name == "threshold":
        out = (plan.t_star, plan.target, "nu")
    else:
        if plan.t_star > 0.0:
            rec = _recommend_cached(
                spec.player(pid).renewal,
                spec.player(plan.target).renewal,
                state.curves[pid],
                plan.t_star,
                policy.rec_samples,
                policy.rec_seed,
            )
            out = (plan.t_star, plan.target, rec.epoch)
        else:
            out = (plan.t_star, plan.target, "nu")
    cache[key] = out
    return out


def playout(
    spec: GameSpec,
    policy: Policy,
    rng: np.random.Generator,
    plan_cache: dict | None = None,
) -> PlayoutResult:
    """Run one game to the end; all randomness comes from rng."""
    state = new_state(spec)
    cache: dict = {} if plan_cache is None else plan_cache
    epochs = {p.id: _EpochBuffer(p.renewal, rng) for p in spec.players}

    while True:
        status = is_terminal(state)
        if status.terminal:
            break
        shooter, target, fire_at = None, None, math.inf
        for pid in sorted(state.armed):
            t_plan, tgt, flavor = _plan_for(state, pid, policy, spec, cache)
            goal = state.clock_origin + t_plan
            buf = epochs[pid]
            if flavor == "nu-1":
                t = buf.last_inside(state.clock_origin, goal)
                if t is None:
                    t = buf.first_at_or_after(goal)
            else:
                t = buf.first_at_or_after(goal)
            if t < fire_at:
                shooter, target, fire_at = pid, tgt, t
        p_hit = evaluate(state.curves[shooter], fire_at - state.clock_origin)
        outcome = "hit" if rng.random() < p_hit else "miss"
        state = apply_shot(state, shooter, target, outcome, at_time=fire_at)

    duration = state.shot_log[-1].time if state.shot_log else 0.0
    return PlayoutResult(
        survivors=state.alive, shot_log=state.shot_log, duration=duration
    )


def estimate(
    spec: GameSpec,
    policy: Policy,
    runs: int,
    seed: int = 0,
    collect_logs: bool = False,
) -> Estimate:
    """Repeat playouts on substreams (seed, run) and tally the outcomes."""
    if runs < 1:
        raise ValueError("runs must be >= 1")
    ids = [p.id for p in spec.players]
    survived = {pid: 0 for pid in ids}
    landed = {pid: 0 for pid in ids}
    logs: list[tuple[ShotEvent, ...]] = []
    cache: dict = {}
    for run in range(runs):
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, run))))
        result = playout(spec, policy, rng, plan_cache=cache)
        for pid in result.survivors:
            survived[pid] += 1
        for pid in {ev.shooter for ev in result.shot_log if ev.outcome == "hit"}:
            landed[pid] += 1
        if collect_logs:
            logs.append(result.shot_log)

    def rate(c: int) -> float:
        return c / runs

    def se(c: int) -> float:
        p = c / runs
        return math.sqrt(p * (1.0 - p) / runs)

    return Estimate(
        runs=runs,
        seed=seed,
        survival_rate={pid: rate(survived[pid]) for pid in ids},
        survival_stderr={pid: se(survived[pid]) for pid in ids},
        hit_rate={pid: rate(landed[pid]) for pid in ids},
        hit_stderr={pid: se(landed[pid]) for pid in ids},
        logs=tuple(logs) if collect_logs else None,
    )
