"""Episode records: JSON-lines persistence and bit-exact replay.

File layout, one JSON object per line::

    {"type": "header", "format": ..., "version": ..., "seed": ..., "config": {...}, ...}
    {"t": 0, "a": [a0, a1, a2, a3]}
    ...
    {"type": "footer", "steps": N, "final_hash": ..., "result": ..., ...}

A missing footer or a step count that disagrees with it marks the file as
truncated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from .config import MatchConfig
from .constants import ENGINE_VERSION
from .state import GameResult, GameState
from .step import new_game, step

FORMAT = "pommerlab-episode"


class RecordError(ValueError):
    pass


class RecordVersionError(RecordError):
    pass


class TruncatedRecordError(RecordError):
    pass


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


@dataclass
class EpisodeRecord:
    seed: int
    config: MatchConfig
    actions: list[tuple[int, int, int, int]] = field(default_factory=list)
    episode_id: int = 0
    team: Optional[str] = None
    opponent: Optional[str] = None
    result: Optional[GameResult] = None
    final_hash: Optional[str] = None
    aborted: Optional[str] = None
    engine_version: str = ENGINE_VERSION
    # Per-agent series keyed by str(agent_id): rewards, positions, ...
    extras: dict[str, Any] = field(default_factory=dict)

    @property
    def length(self) -> int:
        return len(self.actions)

    def dumps(self) -> str:
        header = {
            "type": "header",
            "format": FORMAT,
            "version": self.engine_version,
            "episode_id": self.episode_id,
            "seed": self.seed,
            "config": self.config.to_dict(),
            "team": self.team,
            "opponent": self.opponent,
        }
        lines = [_dumps(header)]
        lines.extend(_dumps({"t": t, "a": list(a)}) for t, a in enumerate(self.actions))
        footer = {
            "type": "footer",
            "steps": len(self.actions),
            "final_hash": self.final_hash,
            "result": None if self.result is None else self.result.to_dict(),
            "aborted": self.aborted,
            "extras": self.extras,
        }
        lines.append(_dumps(footer))
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "EpisodeRecord":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise TruncatedRecordError("empty record")
        try:
            rows = [json.loads(ln) for ln in lines]
        except json.JSONDecodeError as exc:
            raise TruncatedRecordError(f"corrupt record line: {exc}") from exc
        header = rows[0]
        if header.get("type") != "header" or header.get("format") != FORMAT:
            raise RecordError("not a pommerlab episode record")
        if header.get("version") != ENGINE_VERSION:
            raise RecordVersionError(
                f"record written by {header.get('version')!r}, this engine is {ENGINE_VERSION!r}"
            )
        footer = rows[-1]
        if len(rows) < 2 or footer.get("type") != "footer":
            raise TruncatedRecordError("record has no footer")
        steps = rows[1:-1]
        if len(steps) != footer["steps"] or any(r.get("t") != i for i, r in enumerate(steps)):
            raise TruncatedRecordError(f"expected {footer['steps']} steps, found {len(steps)}")
        return cls(
            seed=header["seed"],
            config=MatchConfig.from_dict(header["config"]),
            actions=[tuple(r["a"]) for r in steps],
            episode_id=header["episode_id"],
            team=header.get("team"),
            opponent=header.get("opponent"),
            result=None if footer["result"] is None else GameResult.from_dict(footer["result"]),
            final_hash=footer["final_hash"],
            aborted=footer.get("aborted"),
            engine_version=header["version"],
            extras=footer.get("extras", {}),
        )

    def save(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.dumps())
        return path

    @classmethod
    def load(cls, path) -> "EpisodeRecord":
        return cls.loads(Path(path).read_text())


def replay(record: EpisodeRecord, keep_states: bool = False):
    """Re-run ``record`` from its seed.

    Returns ``(final_state, events)``, or ``(final_state, events, states)``
    with ``keep_states`` where ``states[0]`` is the initial state.
    """
    if record.engine_version != ENGINE_VERSION:
        raise RecordVersionError(f"record engine {record.engine_version!r} != {ENGINE_VERSION!r}")
    state = new_game(record.seed, record.config)
    states = [state]
    events = []
    for t, actions in enumerate(record.actions):
        if state.result is not None:
            raise RecordError(f"record continues after the game ended at step {t}")
        state, ev, _ = step(state, actions)
        events.append(ev)
        if keep_states:
            states.append(state)
    if keep_states:
        return state, events, states
    return state, events


def verify(record: EpisodeRecord) -> bool:
    """True when replaying reproduces the stored final hash."""
    final, _ = replay(record)
    return record.final_hash is not None and final.hash() == record.final_hash
