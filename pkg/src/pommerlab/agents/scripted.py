"""Scripted opponents: Static, Simple, Smart Simple and Smart Simple NoBomb.

The Simple heuristic works only from the acting agent's observation and, in
priority order:

1. escapes cells that a visible bomb or flame will cover, along the quickest
   route to a cell no blast reaches;
2. grabs a visible powerup at most two steps away;
3. bombs when next to Wood or when an enemy sits on its own blast cross, as
   long as a retreat exists afterwards;
4. walks toward the nearest enemy, else the nearest Wood, else the start
   corner of a living enemy;
5. otherwise makes a random move that keeps it out of danger.

Smart Simple agents take the heuristic's preferences in order and skip any
action the one-step filter marks as certainly suicidal.
"""

from __future__ import annotations

import random
from typing import Iterator

import numpy as np

from .. import kernels
from ..engine.constants import START_POSITIONS, Action
from ..engine.observe import Observation
from .filter import filter_mask

DEFAULT_BOMB_LIFE = 10
DEFAULT_FLAME_LIFE = 2


_ARGS_CACHE: dict = {}


def _static_args(agent_id: int, enemies, alive_ids):
    key = (agent_id, alive_ids)
    args = _ARGS_CACHE.get(key)
    if args is None:
        corners = [START_POSITIONS[e] for e in enemies if e in alive_ids]
        args = (
            np.array(enemies, dtype=np.int64),
            np.array([p[0] for p in corners], dtype=np.int64),
            np.array([p[1] for p in corners], dtype=np.int64),
        )
        _ARGS_CACHE[key] = args
    return args


def plan(obs: Observation, hunter: bool = False, bomb_life: int = DEFAULT_BOMB_LIFE,
         flame_life: int = DEFAULT_FLAME_LIFE) -> list[int]:
    """Per-rule candidate actions for ``obs`` (layout in ``kernels.PLAN_*``)."""
    r, c = obs.position
    enemies, rows, cols = _static_args(obs.agent_id, obs.enemy_ids, obs.alive_ids)
    return kernels.simple_plan(
        obs.board, obs.bomb_strength, obs.bomb_fuse, obs.bomb_moving, obs.agents, obs.flames,
        r, c, obs.ammo, obs.blast_strength, enemies, rows, cols, hunter, bomb_life, flame_life,
    ).tolist()


_S = kernels.PLAN_SURVIVE
_T = kernels.PLAN_STEPS


def _evade(p, rng: random.Random):
    if not p[kernels.PLAN_DANGER]:
        return None
    options = [a for a in range(5) if p[_S + a]]
    if not options:
        return None
    best = min(p[_T + a] for a in options)
    quickest = [a for a in options if p[_T + a] == best]
    return quickest[0] if len(quickest) == 1 else rng.choice(quickest)


def _move(p, slot):
    a = p[slot]
    return a if a > 0 else None


def _wander(p, rng: random.Random):
    options = [a for a in (1, 2, 3, 4) if p[kernels.PLAN_WANDER + a - 1]]
    if not options:
        return int(Action.STOP)
    return rng.choice(options)


def ranked(p: list[int], rng: random.Random, hunter: bool = False) -> Iterator[int]:
    """Yield actions best-first from a plan vector; every action appears once.

    The sequence is lazy so callers that accept an early choice do not
    consume randomness on the rest.
    """
    seen = set()
    powerup = _move(p, kernels.PLAN_POWERUP)
    bomb = int(Action.BOMB) if p[kernels.PLAN_BOMB] else None
    ordered = (bomb, powerup) if hunter else (powerup, bomb)
    for a in (_evade(p, rng),) + ordered:
        if a is not None and a not in seen:
            seen.add(a)
            yield a
    for slot in (kernels.PLAN_ENEMY, kernels.PLAN_WOOD, kernels.PLAN_CORNER):
        a = _move(p, slot)
        if a is not None and a not in seen:
            seen.add(a)
            yield a
    a = _wander(p, rng)
    if a not in seen:
        seen.add(a)
        yield a
    rest = [a for a in range(6) if a not in seen]
    rng.shuffle(rest)
    survivable = [a for a in rest if a < 5 and p[_S + a]]
    for a in survivable + [a for a in rest if a not in survivable]:
        yield a


def preferences(
    obs: Observation,
    rng: random.Random,
    hunter: bool = False,
    bomb_life: int = DEFAULT_BOMB_LIFE,
    flame_life: int = DEFAULT_FLAME_LIFE,
) -> Iterator[int]:
    """The heuristic's full action ranking for ``obs``."""
    return ranked(plan(obs, hunter, bomb_life, flame_life), rng, hunter)


def act_static(obs: Observation | None = None) -> int:
    return int(Action.STOP)


def act_simple(obs: Observation, rng: random.Random, hunter: bool = False, **kw) -> int:
    return next(preferences(obs, rng, hunter, **kw))


def _constrained(obs, rng, hunter, no_bomb, bomb_life=DEFAULT_BOMB_LIFE, flame_life=DEFAULT_FLAME_LIFE) -> int:
    p = plan(obs, hunter, bomb_life, flame_life)
    if p[kernels.PLAN_LETHAL]:
        allowed = filter_mask(obs, flame_life).tolist()
    else:
        allowed = [True] * 6
    if no_bomb:
        allowed[int(Action.BOMB)] = False
    for a in ranked(p, rng, hunter):
        if allowed[a]:
            return a
    raise AssertionError("ranked() must cover every action")


def act_smart_simple(obs: Observation, rng: random.Random, hunter: bool = False, **kw) -> int:
    """The heuristic's best action among those the filter allows.

    When the filter allows everything (nothing is certainly safe, or nothing
    is dangerous) this is exactly ``act_simple``.
    """
    return _constrained(obs, rng, hunter, False, **kw)


def act_smart_simple_nobomb(obs: Observation, rng: random.Random, **kw) -> int:
    return _constrained(obs, rng, False, True, **kw)
