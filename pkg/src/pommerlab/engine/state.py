"""Ground-truth game state and per-step event records."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .config import MatchConfig
from .constants import BOARD_SIZE, Cell


class AgentEntity:
    __slots__ = ("id", "row", "col", "ammo", "blast_strength", "can_kick", "alive")

    def __init__(self, id, row, col, ammo, blast_strength, can_kick=False, alive=True):
        self.id = id
        self.row = row
        self.col = col
        self.ammo = ammo
        self.blast_strength = blast_strength
        self.can_kick = can_kick
        self.alive = alive

    @property
    def team(self) -> int:
        return self.id % 2

    @property
    def position(self) -> tuple[int, int]:
        return (self.row, self.col)

    def copy(self) -> "AgentEntity":
        return AgentEntity(self.id, self.row, self.col, self.ammo, self.blast_strength, self.can_kick, self.alive)

    def as_tuple(self):
        return (self.id, self.row, self.col, self.ammo, self.blast_strength, self.can_kick, self.alive)

    def __eq__(self, other):
        return isinstance(other, AgentEntity) and self.as_tuple() == other.as_tuple()

    def __repr__(self):
        return (
            f"AgentEntity(id={self.id}, pos=({self.row}, {self.col}), ammo={self.ammo}, "
            f"blast={self.blast_strength}, kick={self.can_kick}, alive={self.alive})"
        )


class Bomb:
    __slots__ = ("id", "row", "col", "owner", "fuse", "blast_strength", "moving_dir", "kicked")

    def __init__(self, id, row, col, owner, fuse, blast_strength, moving_dir=0, kicked=False):
        self.id = id
        self.row = row
        self.col = col
        self.owner = owner
        self.fuse = fuse
        self.blast_strength = blast_strength
        # 0 = resting, otherwise the Action code of the travel direction.
        self.moving_dir = moving_dir
        # Sticky: set once the bomb has ever been kicked.
        self.kicked = kicked

    @property
    def position(self) -> tuple[int, int]:
        return (self.row, self.col)

    def copy(self) -> "Bomb":
        return Bomb(self.id, self.row, self.col, self.owner, self.fuse, self.blast_strength, self.moving_dir, self.kicked)

    def as_tuple(self):
        return (self.id, self.row, self.col, self.owner, self.fuse, self.blast_strength, self.moving_dir, self.kicked)

    def __eq__(self, other):
        return isinstance(other, Bomb) and self.as_tuple() == other.as_tuple()

    def __repr__(self):
        return (
            f"Bomb(id={self.id}, pos=({self.row}, {self.col}), owner={self.owner}, fuse={self.fuse}, "
            f"strength={self.blast_strength}, moving={self.moving_dir}, kicked={self.kicked})"
        )


class Outcome(Enum):
    WIN = "win"
    TIE = "tie"


class Cause(Enum):
    ELIMINATION = "elimination"
    TIMEOUT = "timeout"
    SIMULTANEOUS_DEATH = "simultaneous_death"


@dataclass(frozen=True)
class GameResult:
    outcome: Outcome
    cause: Cause
    winner: Optional[int] = None  # winning team for Outcome.WIN

    def for_team(self, team: int) -> str:
        """``"win"``, ``"loss"`` or ``"tie"`` from ``team``'s point of view."""
        if self.outcome is Outcome.TIE:
            return "tie"
        return "win" if self.winner == team else "loss"

    def to_dict(self) -> dict:
        return {"outcome": self.outcome.value, "cause": self.cause.value, "winner": self.winner}

    @classmethod
    def from_dict(cls, data: dict) -> "GameResult":
        return cls(Outcome(data["outcome"]), Cause(data["cause"]), data.get("winner"))


@dataclass(frozen=True)
class Death:
    agent_id: int
    position: tuple[int, int]
    # Bombs that detonated this step with a ray over the death cell:
    # (bomb_id, owner_id, kicked). Empty when a lingering flame did it.
    killers: tuple[tuple[int, int, bool], ...] = ()

    def killed_by(self, owner: int, include_kicked: bool = False) -> bool:
        return any(o == owner and (include_kicked or not k) for _, o, k in self.killers)


@dataclass(frozen=True)
class Detonation:
    bomb_id: int
    owner: int
    position: tuple[int, int]
    kicked: bool
    cells: tuple[tuple[int, int], ...]
    wood: tuple[tuple[int, int], ...]


@dataclass
class StepEvents:
    """Ground-truth happenings of one transition.

    The tracker never reads these; they exist so tests and analyzers can
    compare observation-based credit with what actually happened.
    """

    step: int
    detonations: list[Detonation] = field(default_factory=list)
    deaths: list[Death] = field(default_factory=list)
    powerups: list[tuple[int, int]] = field(default_factory=list)  # (agent_id, Cell)
    kicks: list[tuple[int, int]] = field(default_factory=list)  # (agent_id, bomb_id)
    moves: list[tuple[int, tuple[int, int], tuple[int, int]]] = field(default_factory=list)

    def wood_blasted_by(self, agent_id: int) -> list[tuple[int, int]]:
        return [cell for d in self.detonations if d.owner == agent_id for cell in d.wood]

    def powerup_picked(self, agent_id: int) -> list[int]:
        return [kind for a, kind in self.powerups if a == agent_id]

    def kicked_by(self, agent_id: int) -> bool:
        return any(a == agent_id for a, _ in self.kicks)

    def cells_entered(self, agent_id: int) -> list[tuple[int, int]]:
        return [dst for a, _, dst in self.moves if a == agent_id]


class GameState:
    """Full board, agents, bombs and flames at one step.

    ``flames`` is an 11x11 grid of remaining flame lifetimes (0 = no flame);
    ``hidden`` holds the powerup kind concealed under each Wood cell.
    ``fallen`` lists ``(agent_id, row, col)`` of agents that died on the step
    that produced this state.
    """

    __slots__ = (
        "step", "board", "hidden", "agents", "bombs", "flames", "config",
        "seed", "rng", "next_bomb_id", "fallen", "result", "cache",
    )

    def __init__(self, step, board, hidden, agents, bombs, flames, config, seed, rng,
                 next_bomb_id=0, fallen=(), result=None):
        self.step = step
        self.board = board
        self.hidden = hidden
        self.agents = agents
        self.bombs = bombs
        self.flames = flames
        self.config = config
        self.seed = seed
        self.rng = rng
        self.next_bomb_id = next_bomb_id
        self.fallen = fallen
        self.result = result
        # Derived per-step grids (see observe.state_layers); never copied.
        self.cache = None

    def copy(self) -> "GameState":
        return GameState(
            self.step,
            self.board.copy(),
            self.hidden.copy(),
            [a.copy() for a in self.agents],
            [b.copy() for b in self.bombs],
            self.flames.copy(),
            self.config,
            self.seed,
            self.rng,
            self.next_bomb_id,
            self.fallen,
            self.result,
        )

    @property
    def done(self) -> bool:
        return self.result is not None

    def alive_ids(self) -> tuple[int, ...]:
        return tuple(a.id for a in self.agents if a.alive)

    def bomb_at(self, row: int, col: int) -> Optional[Bomb]:
        for b in self.bombs:
            if b.row == row and b.col == col:
                return b
        return None

    def serialize(self) -> bytes:
        """Canonical byte encoding; equal states give equal bytes."""
        header = json.dumps(
            {
                "step": self.step,
                "seed": self.seed,
                "config": self.config.to_dict(),
                "agents": [a.as_tuple() for a in self.agents],
                "bombs": [b.as_tuple() for b in self.bombs],
                "next_bomb_id": self.next_bomb_id,
                "fallen": [list(f) for f in self.fallen],
                "result": None if self.result is None else self.result.to_dict(),
            },
            sort_keys=True,
            separators=(",", ":"),
        ).encode()
        return b"".join(
            [
                header,
                self.board.astype(np.int8).tobytes(),
                self.hidden.astype(np.int8).tobytes(),
                self.flames.astype(np.int8).tobytes(),
            ]
        )

    def hash(self) -> str:
        return hashlib.sha256(self.serialize()).hexdigest()

    def rigid_count(self) -> int:
        return int((self.board == Cell.RIGID).sum())

    def __repr__(self):
        return f"GameState(step={self.step}, alive={self.alive_ids()}, bombs={len(self.bombs)}, result={self.result})"


def empty_grid(fill: int = 0, size: int = BOARD_SIZE) -> np.ndarray:
    return np.full((size, size), fill, dtype=np.int8)
