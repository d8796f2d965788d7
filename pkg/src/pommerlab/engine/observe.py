"""Per-agent partial observations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import FOG, NO_AGENT, enemies_of, teammate_of
from .state import GameState


@dataclass(eq=False)
class Observation:
    """One agent's view of the board after a step.

    Grids are full 11x11 arrays; outside the Chebyshev window around the
    observer ``board`` holds ``FOG``, the bomb and flame layers hold 0 and
    ``agents`` holds ``NO_AGENT``. ``fallen`` lists ``(agent_id, row, col)``
    for agents seen dying on this step.
    """

    agent_id: int
    step: int
    board: np.ndarray
    bomb_strength: np.ndarray
    bomb_fuse: np.ndarray
    bomb_moving: np.ndarray
    flames: np.ndarray
    agents: np.ndarray
    position: tuple[int, int]
    ammo: int
    blast_strength: int
    can_kick: bool
    alive: bool
    alive_ids: tuple[int, ...]
    fallen: tuple[tuple[int, int, int], ...]
    view_radius: int

    @property
    def teammate_id(self) -> int:
        return teammate_of(self.agent_id)

    @property
    def enemy_ids(self) -> tuple[int, int]:
        return enemies_of(self.agent_id)

    def visible(self, row: int, col: int) -> bool:
        return self.board[row, col] != FOG

    def visible_mask(self) -> np.ndarray:
        return self.board != FOG

    def positions(self) -> dict[int, tuple[int, int]]:
        """Visible living agents by id."""
        rows, cols = np.nonzero(self.agents >= 0)
        return {int(self.agents[r, c]): (int(r), int(c)) for r, c in zip(rows, cols)}

    def to_dict(self) -> dict:
        return {
            "agent_id": self.agent_id,
            "step": self.step,
            "board": self.board.tolist(),
            "bomb_strength": self.bomb_strength.tolist(),
            "bomb_fuse": self.bomb_fuse.tolist(),
            "bomb_moving": self.bomb_moving.tolist(),
            "flames": self.flames.tolist(),
            "agents": self.agents.tolist(),
            "position": list(self.position),
            "ammo": self.ammo,
            "blast_strength": self.blast_strength,
            "can_kick": self.can_kick,
            "alive": self.alive,
            "alive_ids": list(self.alive_ids),
            "teammate_id": self.teammate_id,
            "enemy_ids": list(self.enemy_ids),
            "fallen": [list(f) for f in self.fallen],
            "view_radius": self.view_radius,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Observation":
        grid = lambda key: np.array(d[key], dtype=np.int8)  # noqa: E731
        return cls(
            agent_id=int(d["agent_id"]),
            step=int(d["step"]),
            board=grid("board"),
            bomb_strength=grid("bomb_strength"),
            bomb_fuse=grid("bomb_fuse"),
            bomb_moving=grid("bomb_moving"),
            flames=grid("flames"),
            agents=grid("agents"),
            position=tuple(d["position"]),
            ammo=int(d["ammo"]),
            blast_strength=int(d["blast_strength"]),
            can_kick=bool(d["can_kick"]),
            alive=bool(d["alive"]),
            alive_ids=tuple(d["alive_ids"]),
            fallen=tuple(tuple(f) for f in d["fallen"]),
            view_radius=int(d["view_radius"]),
        )

    def __eq__(self, other):
        if not isinstance(other, Observation):
            return NotImplemented
        return self.to_dict() == other.to_dict()


LAYERS = ("board", "bomb_strength", "bomb_fuse", "bomb_moving", "flames", "agents")
_FILL = {"board": FOG, "bomb_strength": 0, "bomb_fuse": 0, "bomb_moving": 0, "flames": 0, "agents": NO_AGENT}


def state_layers(state: GameState) -> np.ndarray:
    """Ground-truth grids stacked in ``LAYERS`` order, cached on the state."""
    return _cached(state)[0]


def _cached(state: GameState):
    if state.cache is not None:
        return state.cache
    n = state.board.shape[0]
    stack = np.zeros((len(LAYERS), n, n), dtype=np.int8)
    stack[0] = state.board
    for b in state.bombs:
        stack[1, b.row, b.col] = b.blast_strength
        stack[2, b.row, b.col] = b.fuse
        stack[3, b.row, b.col] = b.moving_dir
    stack[4] = state.flames
    stack[5] = NO_AGENT
    for a in state.agents:
        if a.alive:
            stack[5, a.row, a.col] = a.id
    state.cache = (stack, state.alive_ids())
    return state.cache


_FOGGED = {}


def _fogged(n: int) -> np.ndarray:
    if n not in _FOGGED:
        _FOGGED[n] = np.stack([np.full((n, n), _FILL[k], dtype=np.int8) for k in LAYERS])
    return _FOGGED[n]


def observe(state: GameState, agent_id: int, view_radius: int | None = None) -> Observation:
    """Restrict ``state`` to the window around ``agent_id``.

    Dead agents observe from the cell they died on. ``view_radius`` defaults
    to the match config's value.
    """
    if not 0 <= agent_id <= 3:
        raise ValueError(f"agent_id must be in 0..3, got {agent_id}")
    radius = state.config.view_radius if view_radius is None else view_radius
    me = state.agents[agent_id]
    stack, alive_ids = _cached(state)
    n = stack.shape[1]
    r0, r1 = max(0, me.row - radius), min(n, me.row + radius + 1)
    c0, c1 = max(0, me.col - radius), min(n, me.col + radius + 1)
    if r0 == 0 and c0 == 0 and r1 == n and c1 == n:
        view = stack.copy()
        fallen = state.fallen
    else:
        view = _fogged(n).copy()
        view[:, r0:r1, c0:c1] = stack[:, r0:r1, c0:c1]
        fallen = tuple(f for f in state.fallen if r0 <= f[1] < r1 and c0 <= f[2] < c1)
    return Observation(
        agent_id,
        state.step,
        view[0],
        view[1],
        view[2],
        view[3],
        view[4],
        view[5],
        (me.row, me.col),
        me.ammo,
        me.blast_strength,
        me.can_kick,
        me.alive,
        alive_ids,
        fallen,
        radius,
    )
