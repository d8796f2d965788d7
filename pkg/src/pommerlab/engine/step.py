"""Joint-action transition.

Resolution order within one step:

1. flame lifetimes and bomb fuses tick down (expired flames vanish);
2. kicked bombs travel one cell;
3. agents move, with bounce-back on conflicts and kicks into bombs;
4. bombs are placed;
5. bombs with an empty fuse, or resting on a flame, detonate, chaining
   through any bomb their rays touch;
6. agents standing on a flame die;
7. surviving agents on a powerup pick it up;
8. the step counter advances and the result, if any, is decided.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .. import kernels
from .board import generate_board
from .config import MatchConfig
from .constants import DELTAS, Action, Cell
from .state import (
    AgentEntity,
    Bomb,
    Cause,
    Death,
    Detonation,
    GameResult,
    GameState,
    Outcome,
    StepEvents,
)

_PASSAGE = int(Cell.PASSAGE)
_WOOD = int(Cell.WOOD)
_EXTRA_BOMB = int(Cell.EXTRA_BOMB)
_INCR_RANGE = int(Cell.INCR_RANGE)
_KICK = int(Cell.KICK)
_STOP = int(Action.STOP)
_BOMB = int(Action.BOMB)
_MOVES = (1, 2, 3, 4)


def new_game(seed: int, config: MatchConfig | None = None) -> GameState:
    config = config or MatchConfig()
    board, hidden, starts, rng = generate_board(seed, config)
    agents = [
        AgentEntity(i, r, c, config.initial_ammo(i), config.initial_blast(i))
        for i, (r, c) in enumerate(starts)
    ]
    flames = np.zeros_like(board)
    return GameState(0, board, hidden, agents, [], flames, config, seed, rng)


def _is_open(board, r, c) -> bool:
    n = board.shape[0]
    if not (0 <= r < n and 0 <= c < n):
        return False
    kind = board.item(r, c)
    return kind == _PASSAGE or kind >= _EXTRA_BOMB


def _move_bombs(state: GameState) -> None:
    board = state.board
    occupied = {(a.row, a.col) for a in state.agents if a.alive}
    resting = {(b.row, b.col) for b in state.bombs}
    targets = {}
    for b in state.bombs:
        if not b.moving_dir:
            continue
        dr, dc = DELTAS[b.moving_dir]
        t = (b.row + dr, b.col + dc)
        if not _is_open(board, *t) or t in resting or t in occupied:
            b.moving_dir = 0
            continue
        targets.setdefault(t, []).append(b)
    for t, group in targets.items():
        if len(group) > 1:
            for b in group:
                b.moving_dir = 0
        else:
            group[0].row, group[0].col = t


def _move_agents(state: GameState, actions: Sequence[int], events: StepEvents) -> None:
    board = state.board
    agents = state.agents
    bombs_at = {(b.row, b.col): b for b in state.bombs}
    origin = {a.id: (a.row, a.col) for a in agents if a.alive}
    desired = dict(origin)
    kick_plans = {}

    for a in agents:
        if not a.alive:
            continue
        act = actions[a.id]
        if act not in _MOVES:
            continue
        dr, dc = DELTAS[act]
        t = (a.row + dr, a.col + dc)
        if not _is_open(board, *t):
            continue
        if t in bombs_at:
            if a.can_kick:
                kick_plans[a.id] = (t, bombs_at[t], (t[0] + dr, t[1] + dc), act)
            continue
        desired[a.id] = t

    # Kicks: the bomb's landing cell must be open, empty and unclaimed.
    occupied = set(origin.values())
    claimed = {}
    for aid, (_, _, land, _) in kick_plans.items():
        claimed.setdefault(land, []).append(aid)
    walk_targets = {desired[aid] for aid in desired if desired[aid] != origin[aid]}
    for aid, (t, bomb, land, act) in kick_plans.items():
        ok = (
            _is_open(board, *land)
            and land not in bombs_at
            and land not in occupied
            and land not in walk_targets
            and len(claimed[land]) == 1
        )
        if ok:
            desired[aid] = t
        else:
            kick_plans[aid] = None

    # Bounce-back: revert conflicting movers until the assignment is stable.
    while True:
        reverted = False
        counts = {}
        for aid, pos in desired.items():
            counts.setdefault(pos, []).append(aid)
        for pos, ids in counts.items():
            if len(ids) > 1:
                for aid in ids:
                    if desired[aid] != origin[aid]:
                        desired[aid] = origin[aid]
                        reverted = True
        for aid, pos in list(desired.items()):
            if pos == origin[aid]:
                continue
            for other, opos in origin.items():
                if other != aid and opos == pos and desired[other] == origin[aid]:
                    desired[aid] = origin[aid]
                    desired[other] = origin[other]
                    reverted = True
        if not reverted:
            break

    for a in agents:
        if not a.alive:
            continue
        new = desired[a.id]
        if new != origin[a.id]:
            events.moves.append((a.id, origin[a.id], new))
            a.row, a.col = new
            plan = kick_plans.get(a.id)
            if plan is not None:
                _, bomb, land, act = plan
                bomb.row, bomb.col = land
                bomb.moving_dir = int(act)
                bomb.kicked = True
                events.kicks.append((a.id, bomb.id))


def _place_bombs(state: GameState, actions: Sequence[int]) -> None:
    occupied = {(b.row, b.col) for b in state.bombs}
    for a in state.agents:
        if a.alive and actions[a.id] == _BOMB and a.ammo > 0 and (a.row, a.col) not in occupied:
            state.bombs.append(
                Bomb(state.next_bomb_id, a.row, a.col, a.id, state.config.bomb_life, a.blast_strength)
            )
            state.next_bomb_id += 1
            a.ammo -= 1
            occupied.add((a.row, a.col))


def _detonate(state: GameState, events: StepEvents):
    """Explode due bombs; returns {cell: tuple of killer triples}."""
    bombs = state.bombs
    if not bombs:
        return {}
    flames = state.flames
    triggered = np.array([b.fuse <= 0 or flames.item(b.row, b.col) > 0 for b in bombs], dtype=np.bool_)
    if not triggered.any():
        return {}
    rows = np.array([b.row for b in bombs], dtype=np.int64)
    cols = np.array([b.col for b in bombs], dtype=np.int64)
    strengths = np.array([b.blast_strength for b in bombs], dtype=np.int64)
    exploded, rays = kernels.detonate(state.board, rows, cols, strengths, triggered)

    board = state.board
    life = state.config.flame_life
    coverage = {}
    hit = np.zeros(board.shape, dtype=bool)
    survivors = []
    agents = state.agents
    for i, b in enumerate(bombs):
        if not exploded[i]:
            survivors.append(b)
            continue
        ray = rays[i]
        hit |= ray
        cells = tuple((int(r), int(c)) for r, c in zip(*np.nonzero(ray)))
        wood = tuple(cell for cell in cells if board.item(cell) == _WOOD)
        triple = (b.id, b.owner, b.kicked)
        for cell in cells:
            coverage.setdefault(cell, []).append(triple)
        events.detonations.append(Detonation(b.id, b.owner, (b.row, b.col), b.kicked, cells, wood))
        agents[b.owner].ammo += 1
    state.bombs = survivors

    # Walls change only after every ray was traced on the old board.
    wood_hit = hit & (board == _WOOD)
    item_hit = hit & (board >= _EXTRA_BOMB)
    board[item_hit] = _PASSAGE
    board[wood_hit] = state.hidden[wood_hit]
    state.hidden[wood_hit] = 0
    flames[hit] = life
    return {cell: tuple(t) for cell, t in coverage.items()}


def _apply_flames(state: GameState, coverage, events: StepEvents) -> list:
    fallen = []
    for a in state.agents:
        if a.alive and state.flames.item(a.row, a.col) > 0:
            a.alive = False
            pos = (a.row, a.col)
            events.deaths.append(Death(a.id, pos, coverage.get(pos, ())))
            fallen.append((a.id, a.row, a.col))
    return fallen


def _pick_powerups(state: GameState, events: StepEvents) -> None:
    board = state.board
    for a in state.agents:
        if not a.alive:
            continue
        kind = board.item(a.row, a.col)
        if kind == _EXTRA_BOMB:
            a.ammo += 1
        elif kind == _INCR_RANGE:
            a.blast_strength += 1
        elif kind == _KICK:
            a.can_kick = True
        else:
            continue
        board[a.row, a.col] = _PASSAGE
        events.powerups.append((a.id, kind))


def _decide(state: GameState) -> Optional[GameResult]:
    alive0 = any(a.alive for a in state.agents if a.id % 2 == 0)
    alive1 = any(a.alive for a in state.agents if a.id % 2 == 1)
    if not alive0 and not alive1:
        return GameResult(Outcome.TIE, Cause.SIMULTANEOUS_DEATH)
    if not alive1:
        return GameResult(Outcome.WIN, Cause.ELIMINATION, 0)
    if not alive0:
        return GameResult(Outcome.WIN, Cause.ELIMINATION, 1)
    if state.step >= state.config.max_steps:
        return GameResult(Outcome.TIE, Cause.TIMEOUT)
    return None


def step(state: GameState, actions: Sequence[int]):
    """Advance one step; the input state is left untouched.

    Returns ``(new_state, events, result)`` with ``result`` None while the
    game is running.
    """
    if state.result is not None:
        raise ValueError("game is already over")
    if len(actions) != 4:
        raise ValueError(f"expected 4 actions, got {len(actions)}")
    acts = []
    for a in actions:
        a = int(a)
        if not 0 <= a <= 5:
            raise ValueError(f"invalid action {a}")
        acts.append(a)
    for agent in state.agents:
        if not agent.alive:
            acts[agent.id] = _STOP

    s = state.copy()
    events = StepEvents(step=state.step + 1)

    flames = s.flames
    if flames.any():
        np.subtract(flames, 1, out=flames, where=flames > 0)
    for b in s.bombs:
        b.fuse -= 1

    if any(b.moving_dir for b in s.bombs):
        _move_bombs(s)
    _move_agents(s, acts, events)
    _place_bombs(s, acts)
    coverage = _detonate(s, events)
    s.fallen = tuple(_apply_flames(s, coverage, events))
    _pick_powerups(s, events)
    s.step += 1
    s.result = _decide(s)
    return s, events, s.result
