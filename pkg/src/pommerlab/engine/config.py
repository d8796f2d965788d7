from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Any


@dataclass(frozen=True)
class MatchConfig:
    """Rules and per-team starting stats for one match.

    Team 0 is agents {0, 2}, team 1 is {1, 3}. The per-team ammo/blast fields
    only change the stats agents start with.
    """

    max_steps: int = 800
    view_radius: int = 5
    initial_ammo_team0: int = 1
    initial_ammo_team1: int = 1
    initial_blast_team0: int = 2
    initial_blast_team1: int = 2
    powerup_probability: float = 0.5
    reward_shaping_enabled: bool = True
    bomb_life: int = 10
    flame_life: int = 2
    num_rigid: int = 36
    num_wood: int = 36
    tie_reward: float = -1.0

    def __post_init__(self):
        if self.max_steps < 1:
            raise ValueError("max_steps must be positive")
        if self.view_radius < 0:
            raise ValueError("view_radius must be non-negative")
        if min(self.initial_ammo_team0, self.initial_ammo_team1) < 0:
            raise ValueError("initial ammo must be non-negative")
        if min(self.initial_blast_team0, self.initial_blast_team1) < 1:
            raise ValueError("blast strength must be at least 1")
        if not 0.0 <= self.powerup_probability <= 1.0:
            raise ValueError("powerup_probability must lie in [0, 1]")
        if self.bomb_life < 1 or self.flame_life < 1:
            raise ValueError("bomb_life and flame_life must be positive")
        if self.num_rigid % 2 or self.num_wood % 2:
            raise ValueError("wall counts must be even (walls are placed in mirrored pairs)")

    def initial_ammo(self, agent_id: int) -> int:
        return self.initial_ammo_team0 if agent_id % 2 == 0 else self.initial_ammo_team1

    def initial_blast(self, agent_id: int) -> int:
        return self.initial_blast_team0 if agent_id % 2 == 0 else self.initial_blast_team1

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "MatchConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown MatchConfig fields: {sorted(unknown)}")
        return cls(**data)

    def replace(self, **changes) -> "MatchConfig":
        return dataclasses.replace(self, **changes)
