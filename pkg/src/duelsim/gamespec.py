"""Validated description of one game: players, curves, bullets, epochs."""
from __future__ import annotations

from dataclasses import dataclass, field

from .curves import SuccessCurve
from .renewal import RenewalProcess


@dataclass(frozen=True)
class PlayerSpec:
    """One player's id, success curve, bullet count, and epoch law."""

    id: int
    curve: SuccessCurve
    bullets: int = 1
    renewal: RenewalProcess = field(
        default_factory=lambda: RenewalProcess.exponential(1.0)
    )

    def __post_init__(self):
        if not isinstance(self.id, int) or isinstance(self.id, bool) or self.id < 1:
            raise ValueError("player id must be a positive integer")
        if not isinstance(self.bullets, int) or self.bullets < 1:
            raise ValueError("bullets must be an integer >= 1")
        if self.curve.kind == "zero":
            raise ValueError("players must start with a live curve")


@dataclass(frozen=True)
class GameSpec:
    """Full game description; needs two or more players with unique ids."""

    players: tuple[PlayerSpec, ...]
    tolerance: float = 1e-9

    def __post_init__(self):
        if len(self.players) < 2:
            raise ValueError("need at least two players")
        ids = [p.id for p in self.players]
        if len(set(ids)) != len(ids):
            raise ValueError("player ids must be unique")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be > 0")

    def curves(self) -> dict[int, SuccessCurve]:
        return {p.id: p.curve for p in self.players}

    def bullets(self) -> dict[int, int]:
        return {p.id: p.bullets for p in self.players}

    def processes(self) -> dict[int, RenewalProcess]:
        return {p.id: p.renewal for p in self.players}

    def player(self, pid: int) -> PlayerSpec:
        for p in self.players:
            if p.id == pid:
                return p
        raise ValueError(f"no player with id {pid}")
