"""Deterministic Pommerman team-mode simulation."""

from .board import corners_connected, generate_board
from .config import MatchConfig
from .constants import (
    BOARD_SIZE,
    DELTAS,
    ENGINE_VERSION,
    FOG,
    NO_AGENT,
    START_POSITIONS,
    TEAMS,
    Action,
    Cell,
    enemies_of,
    team_of,
    teammate_of,
)
from .observe import Observation, observe
from .record import (
    EpisodeRecord,
    RecordError,
    RecordVersionError,
    TruncatedRecordError,
    replay,
    verify,
)
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
from .step import new_game, step

__all__ = [
    "BOARD_SIZE", "DELTAS", "ENGINE_VERSION", "FOG", "NO_AGENT", "START_POSITIONS", "TEAMS",
    "Action", "AgentEntity", "Bomb", "Cause", "Cell", "Death", "Detonation", "EpisodeRecord",
    "GameResult", "GameState", "MatchConfig", "Observation", "Outcome", "RecordError",
    "RecordVersionError", "StepEvents", "TruncatedRecordError", "corners_connected",
    "enemies_of", "generate_board", "new_game", "observe", "replay", "step", "team_of",
    "teammate_of", "verify",
]
