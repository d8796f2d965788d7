"""Random symmetric board generation."""

from __future__ import annotations

import numpy as np

from .. import kernels
from .config import MatchConfig
from .constants import BOARD_SIZE, POWERUPS, START_POSITIONS, Cell

MAX_ATTEMPTS = 64


def _corridor_cells(size: int) -> set[tuple[int, int]]:
    """Start corners plus the two edge cells on each side of them."""
    cells = set()
    for r, c in START_POSITIONS:
        dr = 1 if r == 0 else -1
        dc = 1 if c == 0 else -1
        cells.add((r, c))
        for k in (1, 2):
            cells.add((r + dr * k, c))
            cells.add((r, c + dc * k))
    return {(r, c) for r, c in cells if 0 <= r < size and 0 <= c < size}


_CORRIDORS = _corridor_cells(BOARD_SIZE)
# Strict upper triangle minus corridors (and their mirror images).
_PAIR_SLOTS = np.array(
    [
        (r, c)
        for r in range(BOARD_SIZE)
        for c in range(r + 1, BOARD_SIZE)
        if (r, c) not in _CORRIDORS and (c, r) not in _CORRIDORS
    ],
    dtype=np.int64,
)


def corners_connected(board: np.ndarray) -> bool:
    """Flood fill over non-Rigid cells reaches every start corner."""
    open_cells = board != Cell.RIGID
    r0, c0 = START_POSITIONS[0]
    dist, _ = kernels.bfs(open_cells, r0, c0)
    return all(dist[r, c] >= 0 for r, c in START_POSITIONS)


def _sample_walls(rng: np.random.Generator, config: MatchConfig) -> np.ndarray:
    board = np.zeros((BOARD_SIZE, BOARD_SIZE), dtype=np.int8)
    n_rigid = config.num_rigid // 2
    n_wood = config.num_wood // 2
    if n_rigid + n_wood > len(_PAIR_SLOTS):
        raise ValueError("too many walls for the board")
    chosen = rng.permutation(len(_PAIR_SLOTS))[: n_rigid + n_wood]
    for i, slot in enumerate(chosen):
        r, c = _PAIR_SLOTS[slot]
        kind = Cell.RIGID if i < n_rigid else Cell.WOOD
        board[r, c] = kind
        board[c, r] = kind
    return board


def generate_board(seed: int, config: MatchConfig | None = None):
    """Build the starting board for ``seed``.

    Returns ``(board, hidden, starts, rng)`` where ``hidden`` gives the
    powerup kind under each Wood cell (0 when none) and ``rng`` is the
    generator after its last draw.
    """
    config = config or MatchConfig()
    for attempt in range(MAX_ATTEMPTS):
        rng = np.random.default_rng([seed, attempt])
        board = _sample_walls(rng, config)
        if corners_connected(board):
            break
    else:
        # Deterministic repair: drop mirrored rigid pairs until connected.
        rigid = [(r, c) for r, c in _PAIR_SLOTS if board[r, c] == Cell.RIGID]
        for r, c in rigid:
            board[r, c] = board[c, r] = Cell.PASSAGE
            if corners_connected(board):
                break

    hidden = np.zeros_like(board)
    wood = np.argwhere(board == Cell.WOOD)
    if len(wood):
        holds = rng.random(len(wood)) < config.powerup_probability
        kinds = rng.integers(0, len(POWERUPS), size=len(wood))
        for (r, c), h, k in zip(wood, holds, kinds):
            if h:
                hidden[r, c] = POWERUPS[k]
    return board, hidden, START_POSITIONS, rng
