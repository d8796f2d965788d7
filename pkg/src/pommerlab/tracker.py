"""Observation-only reward shaping for one agent.

Per step the agent earns 0.01 for entering a cell it has not visited this
episode, 0.01 for picking up a powerup and 0.01 per Wood cell its own bomb
is seen destroying. At the end of the game the environment reward ``E`` and
the kill term ``K`` are added with weight 0.5 each:

    total_t = T_t                         (non-terminal)
    total_t = 0.5 * E + 0.5 * K + T_t     (terminal)

``K`` sums +0.5 per credited enemy kill, -0.5 per credited teammate kill and
-1 for the agent's own death. A kill is credited only when the tracker saw
its own bomb go off and saw the victim fall on one of that bomb's blast
cells. A bomb that leaves the window or is seen kicked loses all credit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .engine.config import MatchConfig
from .engine.constants import FOG, Action, Cell, team_of
from .engine.observe import Observation
from .engine.state import GameResult

NEW_CELL_REWARD = 0.01
POWERUP_REWARD = 0.01
WOOD_REWARD = 0.01
OPPONENT_KILL_VALUE = 0.50
TEAMMATE_KILL_VALUE = -0.50
OWN_DEATH_VALUE = -1.00
TERMINAL_WEIGHT = 0.5
KILL_WEIGHT = 0.5

_RIGID = int(Cell.RIGID)
_WOOD = int(Cell.WOOD)
_ITEM = int(Cell.EXTRA_BOMB)
_BOMB = int(Action.BOMB)
_DR = (-1, 0, 1, 0)
_DC = (0, -1, 0, 1)


@dataclass
class TrackedBomb:
    position: tuple[int, int]
    fuse: int
    blast_strength: int
    placed_step: int
    invalidated: bool = False
    reason: str = ""


@dataclass(frozen=True)
class KillEvent:
    step: int
    victim: int
    position: tuple[int, int]
    bomb_position: tuple[int, int]
    teammate: bool


@dataclass
class RewardBreakdown:
    step: int
    T: float
    E: float = 0.0
    K: float = 0.0
    total: float = 0.0
    terminal: bool = False


@dataclass
class TrackerState:
    agent_id: int
    bomb_life: int = 10
    visited_cells: set = field(default_factory=set)
    tracked_bombs: list = field(default_factory=list)
    cumulative: dict = field(
        default_factory=lambda: {
            "cells_visited": 0,
            "powerups": 0,
            "wood_blasted": 0,
            "opp_kills": 0,
            "teammate_kills": 0,
            "own_death": 0,
        }
    )
    kills: list = field(default_factory=list)
    blasted_cells: set = field(default_factory=set)
    credited_victims: set = field(default_factory=set)
    last_step: int = -1
    prev: Optional[Observation] = None

    @classmethod
    def start(cls, obs: Observation, bomb_life: int = 10) -> "TrackerState":
        """Tracker for a fresh episode, seeded with the initial observation."""
        t = cls(obs.agent_id, bomb_life)
        reset(t, obs)
        return t

    @property
    def opponent_kills(self) -> int:
        return self.cumulative["opp_kills"]

    @property
    def teammate_kills(self) -> int:
        return self.cumulative["teammate_kills"]


def reset(tracker: TrackerState, obs: Observation) -> None:
    if obs.agent_id != tracker.agent_id:
        raise ValueError(f"observation of agent {obs.agent_id} fed to tracker of {tracker.agent_id}")
    tracker.visited_cells = {tuple(obs.position)}
    tracker.tracked_bombs = []
    for k in tracker.cumulative:
        tracker.cumulative[k] = 0
    tracker.kills = []
    tracker.blasted_cells = set()
    tracker.credited_victims = set()
    tracker.last_step = obs.step
    tracker.prev = obs


def blast_cells(board: np.ndarray, position, strength: int) -> set[tuple[int, int]]:
    """Cells a blast from ``position`` covers on ``board``; fog stops a ray."""
    n = board.shape[0]
    r0, c0 = position
    cells = {(r0, c0)}
    for dr, dc in zip(_DR, _DC):
        r, c = r0, c0
        for _ in range(1, strength):
            r += dr
            c += dc
            if not (0 <= r < n and 0 <= c < n):
                break
            kind = board[r, c]
            if kind == _RIGID or kind == FOG:
                break
            cells.add((r, c))
            if kind == _WOOD:
                break
    return cells


def _kicked(prev: Observation, obs: Observation, pos) -> bool:
    """Someone stands (or fell) on ``pos`` who was not there before."""
    r, c = pos
    now = int(obs.agents[r, c])
    if now < 0:
        for aid, fr, fc in obs.fallen:
            if (fr, fc) == (r, c):
                now = aid
                break
    if now < 0:
        return False
    was = int(prev.agents[r, c])
    return was != now


def attribute_kills(tracker: TrackerState, prev: Observation, obs: Observation, bomb: TrackedBomb) -> list[KillEvent]:
    """Kill events for ``bomb``, which went off between ``prev`` and ``obs``."""
    if bomb.invalidated:
        return []
    cells = blast_cells(prev.board, bomb.position, bomb.blast_strength)
    me = tracker.agent_id
    events = []
    for victim, r, c in obs.fallen:
        if victim == me or victim in obs.alive_ids or (r, c) not in cells:
            continue
        events.append(KillEvent(obs.step, victim, (r, c), bomb.position, team_of(victim) == team_of(me)))
    return events


def update(tracker: TrackerState, obs: Observation, own_action: int) -> float:
    """Consume the observation produced by ``own_action``; returns ``T_t``."""
    prev = tracker.prev
    if prev is None:
        raise ValueError("tracker has no initial observation; call reset() first")
    if obs.agent_id != tracker.agent_id:
        raise ValueError(f"observation of agent {obs.agent_id} fed to tracker of {tracker.agent_id}")
    if obs.step != tracker.last_step + 1:
        raise ValueError(f"expected step {tracker.last_step + 1}, got {obs.step}")
    tracker.last_step = obs.step
    tracker.prev = obs
    if not prev.alive:
        return 0.0

    cum = tracker.cumulative
    reward = 0.0

    pr, pc = prev.position
    if (
        int(own_action) == _BOMB
        and prev.ammo >= 1
        and prev.bomb_strength[pr, pc] == 0
    ):
        tracker.tracked_bombs.append(TrackedBomb((pr, pc), tracker.bomb_life, prev.blast_strength, obs.step, False))

    # Resolve tracked bombs: still ticking, lost from view, kicked or gone off.
    keep = []
    for bomb in tracker.tracked_bombs:
        r, c = bomb.position
        if obs.board[r, c] == FOG:
            if not bomb.invalidated:
                bomb.invalidated, bomb.reason = True, "fogged"
            keep.append(bomb)
            continue
        if _kicked(prev, obs, bomb.position):
            # The bomb rolled off and its new cell cannot be told apart from
            # anyone else's bomb; stop following it.
            continue
        if obs.bomb_strength[r, c] > 0:
            if bomb.placed_step != obs.step:
                bomb.fuse -= 1
            keep.append(bomb)
            continue
        if bomb.invalidated:
            continue
        # Rays are traced on the cell kinds from before the blast.
        cells = blast_cells(prev.board, bomb.position, bomb.blast_strength)
        n_wood = 0
        for cell in cells:
            if prev.board[cell] == _WOOD and obs.board[cell] != _WOOD and obs.board[cell] != FOG:
                if cell not in tracker.blasted_cells:
                    tracker.blasted_cells.add(cell)
                    n_wood += 1
        cum["wood_blasted"] += n_wood
        reward += WOOD_REWARD * n_wood
        for ev in attribute_kills(tracker, prev, obs, bomb):
            if ev.victim in tracker.credited_victims:
                continue
            tracker.credited_victims.add(ev.victim)
            tracker.kills.append(ev)
            cum["teammate_kills" if ev.teammate else "opp_kills"] += 1
    tracker.tracked_bombs = keep

    if not obs.alive:
        cum["own_death"] = 1
        return reward

    pos = tuple(obs.position)
    if prev.board[pos] >= _ITEM and pos != (pr, pc):
        cum["powerups"] += 1
        reward += POWERUP_REWARD
    if pos not in tracker.visited_cells:
        tracker.visited_cells.add(pos)
        cum["cells_visited"] += 1
        reward += NEW_CELL_REWARD
    return reward


def kill_reward(tracker: TrackerState, own_alive: bool) -> float:
    cum = tracker.cumulative
    k = OPPONENT_KILL_VALUE * cum["opp_kills"] + TEAMMATE_KILL_VALUE * cum["teammate_kills"]
    if not own_alive:
        k += OWN_DEATH_VALUE
    return k


def environment_reward(result: GameResult, team: int, tie_reward: float = -1.0) -> float:
    outcome = result.for_team(team)
    if outcome == "win":
        return 1.0
    if outcome == "loss":
        return -1.0
    return float(tie_reward)


def terminal_rewards(tracker: TrackerState, result: GameResult, own_alive: bool, tie_reward: float = -1.0):
    """``(E, K)`` once the game is over."""
    return environment_reward(result, team_of(tracker.agent_id), tie_reward), kill_reward(tracker, own_alive)


def compose(E: float, K: float, T: float, is_terminal: bool, shaping: bool = True) -> float:
    if not shaping:
        return float(E) if is_terminal else 0.0
    if not is_terminal:
        return T
    return TERMINAL_WEIGHT * E + KILL_WEIGHT * K + T


class RewardTracker:
    """Convenience wrapper producing a ``RewardBreakdown`` per step."""

    def __init__(self, agent_id: int, config: MatchConfig | None = None):
        self.config = config or MatchConfig()
        self.agent_id = agent_id
        self.state: Optional[TrackerState] = None
        self.log: list[RewardBreakdown] = []

    def reset(self, obs: Observation) -> None:
        self.state = TrackerState.start(obs, self.config.bomb_life)
        self.log = []

    def step(self, obs: Observation, own_action: int, result: GameResult | None = None) -> RewardBreakdown:
        T = update(self.state, obs, own_action)
        shaping = self.config.reward_shaping_enabled
        if result is None:
            row = RewardBreakdown(obs.step, T, total=compose(0.0, 0.0, T, False, shaping))
        else:
            E, K = terminal_rewards(self.state, result, obs.alive, self.config.tie_reward)
            row = RewardBreakdown(obs.step, T, E, K, compose(E, K, T, True, shaping), True)
        self.log.append(row)
        return row
