"""Timing duels between n players: schedules, exit statistics, playouts."""

from .curves import SuccessCurve, evaluate, evaluate_many, find_level, make_curve, zeroed
from .engine import (
    GameState,
    ShotEvent,
    TerminalStatus,
    apply_shot,
    is_terminal,
    local_time,
    new_state,
)
from .gamespec import GameSpec, PlayerSpec
from .renewal import (
    ExitSample,
    ExitStats,
    RenewalProcess,
    ShotPlan,
    backend,
    exit_stats_exponential,
    exit_time_samples,
    mc_exit_stats,
    mc_functional,
    recommend_shot,
    sample_exit,
)
from .schedule import (
    Battlefield,
    PairSchedule,
    build_schedule,
    pairwise_time,
    player_schedule,
)
from .simulate import Estimate, Policy, PlayoutResult, estimate, playout
from .targeting import (
    BattlefieldScore,
    TargetPlan,
    battlefield_scores,
    best_battlefield,
    indicator,
    multi_bullet_battlefields,
    success_prob,
)

__version__ = "0.1.0"

__all__ = [
    "Battlefield",
    "BattlefieldScore",
    "Estimate",
    "ExitSample",
    "ExitStats",
    "GameSpec",
    "GameState",
    "PairSchedule",
    "PlayerSpec",
    "PlayoutResult",
    "Policy",
    "RenewalProcess",
    "ShotEvent",
    "ShotPlan",
    "SuccessCurve",
    "TargetPlan",
    "TerminalStatus",
    "apply_shot",
    "backend",
    "battlefield_scores",
    "best_battlefield",
    "build_schedule",
    "estimate",
    "evaluate",
    "evaluate_many",
    "exit_stats_exponential",
    "exit_time_samples",
    "find_level",
    "indicator",
    "is_terminal",
    "local_time",
    "make_curve",
    "mc_exit_stats",
    "mc_functional",
    "multi_bullet_battlefields",
    "new_state",
    "pairwise_time",
    "player_schedule",
    "playout",
    "recommend_shot",
    "sample_exit",
    "success_prob",
    "zeroed",
    "__version__",
]
