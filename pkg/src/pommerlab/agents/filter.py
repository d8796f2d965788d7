"""One-step suicide filter.

An action is removed when every way the next transition could go, given
what the agent sees, leaves it on a lethal cell. The uncertainty comes from
other agents: an occupied target may or may not be vacated, a free target
may be contested (both movers bounce back) and a kick may be blocked. Lethal
cells are those a visible flame or blast covers one step ahead, after moving
bombs have travelled.
"""

from __future__ import annotations

import numpy as np

from .. import kernels
from ..engine.constants import Action
from ..engine.observe import Observation

ALL_ACTIONS = tuple(int(a) for a in Action)
FLAME_LIFE = 2


def filter_mask(obs: Observation, flame_life: int = FLAME_LIFE) -> np.ndarray:
    r, c = obs.position
    return kernels.suicide_filter(
        obs.board, obs.bomb_strength, obs.bomb_fuse, obs.bomb_moving, obs.agents, obs.flames,
        r, c, obs.agent_id, bool(obs.can_kick), flame_life,
    )


def filter_actions(obs: Observation, flame_life: int = FLAME_LIFE) -> tuple[int, ...]:
    """Actions that are not certainly fatal on the next step.

    Returns all six actions when none survives for sure.
    """
    mask = filter_mask(obs, flame_life)
    return tuple(a for a in ALL_ACTIONS if mask[a])
