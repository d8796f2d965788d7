"""Integer codes shared by the engine, agents and tracker."""

from __future__ import annotations

from enum import IntEnum

BOARD_SIZE = 11
ENGINE_VERSION = "pommerlab-engine/1"


class Action(IntEnum):
    STOP = 0
    UP = 1
    LEFT = 2
    DOWN = 3
    RIGHT = 4
    BOMB = 5


class Cell(IntEnum):
    PASSAGE = 0
    RIGID = 1
    WOOD = 2
    EXTRA_BOMB = 3
    INCR_RANGE = 4
    KICK = 5


# Marker used in observation grids for cells outside the visibility window.
FOG = -1
NO_AGENT = -1

POWERUPS = (Cell.EXTRA_BOMB, Cell.INCR_RANGE, Cell.KICK)

# (drow, dcol) indexed by Action value; STOP and BOMB do not move.
DELTAS = ((0, 0), (-1, 0), (0, -1), (1, 0), (0, 1), (0, 0))
MOVES = (Action.UP, Action.LEFT, Action.DOWN, Action.RIGHT)

TEAMS = ((0, 2), (1, 3))

# Start corners by agent id; teammates sit on opposite corners.
START_POSITIONS = ((0, 0), (BOARD_SIZE - 1, 0), (BOARD_SIZE - 1, BOARD_SIZE - 1), (0, BOARD_SIZE - 1))


def team_of(agent_id: int) -> int:
    return agent_id % 2


def teammate_of(agent_id: int) -> int:
    return (agent_id + 2) % 4


def enemies_of(agent_id: int) -> tuple[int, int]:
    first = (agent_id + 1) % 4
    return tuple(sorted((first, (first + 2) % 4)))
