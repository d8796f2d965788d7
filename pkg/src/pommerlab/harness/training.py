"""Curriculum-driven rollout collection in blocks of parallel games."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Mapping, Optional

from ..agents.policy import OpponentKind, PolicyHandle
from ..curriculum import CurriculumError, CurriculumSchedule, ScheduleCursor, validate
from ..engine import EpisodeRecord, MatchConfig
from .parallel import EpisodeJob, run_jobs
from .runner import Trajectory, episode_seed, trajectories_of

DEFAULT_PARALLELISM = 64
LOG_COLUMNS = ("episode_id", "phase", "opponent", "result", "game_length", "E", "K", "sum_T", "total")


@dataclass(frozen=True)
class PhaseMeta:
    game_index: int
    phase: int
    opponent: OpponentKind
    value_only: bool


@dataclass
class Block:
    index: int
    episodes: list = field(default_factory=list)  # [(EpisodeRecord, PhaseMeta)]

    @property
    def trajectories(self) -> list[Trajectory]:
        return [t for rec, _ in self.episodes for t in trajectories_of(rec)]

    @property
    def value_only(self) -> bool:
        return all(m.value_only for _, m in self.episodes)

    def __len__(self):
        return len(self.episodes)


def run_curriculum(
    schedule: CurriculumSchedule,
    team: PolicyHandle | str = "SS",
    parallelism: int = DEFAULT_PARALLELISM,
    workers: int = 1,
    base_seed: int = 0,
    schedule_seed: Optional[int] = None,
    max_games: Optional[int] = None,
    config: Optional[MatchConfig] = None,
    opponents: Optional[Mapping] = None,
    start: int = 0,
) -> Iterator[Block]:
    """Yield blocks of up to ``parallelism`` finished games until the budget runs out.

    ``opponents`` maps an opponent kind to the handle that plays it (the
    default is the built-in policy of that kind). The opponent order comes
    from the schedule, so block size and worker count never change which
    game faces whom.
    """
    problem = validate(schedule)
    if problem is not None:
        raise CurriculumError(str(problem))
    if parallelism < 1:
        raise ValueError("parallelism must be >= 1")
    team = team if isinstance(team, PolicyHandle) else PolicyHandle(team)
    config = config or MatchConfig()
    seats = {k: PolicyHandle(k.value) for k in OpponentKind}
    for k, h in (opponents or {}).items():
        seats[OpponentKind.parse(k)] = h
    sched_seed = base_seed if schedule_seed is None else schedule_seed
    for index, metas in enumerate(plan_blocks(schedule, parallelism, sched_seed, max_games, start)):
        jobs = [
            EpisodeJob(m.game_index, episode_seed(base_seed, m.game_index), team, seats[m.opponent], config,
                       m.value_only, {"phase": m.phase})
            for m in metas
        ]
        records = list(run_jobs(jobs, workers))
        yield Block(index, list(zip(records, metas)))


def plan_blocks(schedule: CurriculumSchedule, parallelism: int = DEFAULT_PARALLELISM, seed: int = 0,
                max_games: Optional[int] = None, start: int = 0) -> Iterator[list[PhaseMeta]]:
    """Opponent assignments block by block, without playing anything."""
    cursor = ScheduleCursor(schedule, seed, start, None if max_games is None else start + max_games)
    while True:
        slots = cursor.reserve(parallelism)
        if not slots:
            return
        yield [PhaseMeta(g, phase, kind, vo) for g, kind, vo, phase in slots]


def log_row(record: EpisodeRecord, meta: PhaseMeta) -> dict:
    """One training-log line; reward columns average the two team agents."""
    trs = trajectories_of(record)
    n = max(1, len(trs))
    if record.result is None:
        result = "aborted"
    else:
        result = record.result.for_team(0)
    return {
        "episode_id": record.episode_id,
        "phase": meta.phase,
        "opponent": meta.opponent.value,
        "result": result,
        "game_length": record.length,
        "E": round(sum(t.E for t in trs) / n, 6),
        "K": round(sum(t.K for t in trs) / n, 6),
        "sum_T": round(sum(sum(t.T) for t in trs) / n, 6),
        "total": round(sum(t.return_ for t in trs) / n, 6),
    }


class TrainingLog:
    """Appends ``training_log.csv`` rows as blocks arrive."""

    def __init__(self, path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = self.path.open("w", newline="")
        self._w = csv.DictWriter(self._fh, fieldnames=LOG_COLUMNS, lineterminator="\n")
        self._w.writeheader()
        self.rows = 0

    def add(self, block: Block) -> None:
        for rec, meta in block.episodes:
            self._w.writerow(log_row(rec, meta))
            self.rows += 1
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
