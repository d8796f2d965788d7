"""Opponent curricula over a fixed budget of training games.

A schedule is a value-only warmup phase followed by ordered phases, each a
quota of games per opponent kind. Within a phase the kinds are interleaved
by always serving the kind with the largest remaining share of its quota.
Equivalently, the j-th game (from 0) against kind k sits at position
j / quota_k and games are sorted by position, ties broken by a
seed-dependent ranking of the kinds. Totals per phase are exact by
construction.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .agents.policy import OpponentKind

KINDS = (OpponentKind.ST, OpponentKind.SS, OpponentKind.SS_NB, OpponentKind.EXT)
TRAINING_BUDGET = 95_000
WARMUP_GAMES = 5_000


class CurriculumError(ValueError):
    pass


class BudgetExhausted(CurriculumError):
    pass


@dataclass(frozen=True)
class PhaseSpec:
    counts: dict
    value_only: bool = False

    def __post_init__(self):
        counts = {OpponentKind.parse(k): int(v) for k, v in dict(self.counts).items()}
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def to_dict(self) -> dict:
        return {"counts": {k.value: v for k, v in self.counts.items()}, "value_only": self.value_only}

    @classmethod
    def from_dict(cls, d: dict) -> "PhaseSpec":
        return cls(d["counts"], bool(d.get("value_only", False)))


def _even_warmup(total: int = WARMUP_GAMES) -> PhaseSpec:
    base, extra = divmod(total, len(KINDS))
    return PhaseSpec({k: base + (1 if i < extra else 0) for i, k in enumerate(KINDS)}, value_only=True)


@dataclass
class CurriculumSchedule:
    name: str
    phases: list
    warmup: PhaseSpec = field(default_factory=_even_warmup)

    def __post_init__(self):
        self.phases = [p if isinstance(p, PhaseSpec) else PhaseSpec.from_dict(p) for p in self.phases]
        if not isinstance(self.warmup, PhaseSpec):
            self.warmup = PhaseSpec.from_dict(self.warmup)
        self._sequences = {}

    @property
    def all_phases(self) -> list:
        return [self.warmup] + list(self.phases)

    @property
    def total_games(self) -> int:
        return sum(p.total for p in self.all_phases)

    def to_dict(self) -> dict:
        return {"name": self.name, "warmup": self.warmup.to_dict(), "phases": [p.to_dict() for p in self.phases]}

    @classmethod
    def from_dict(cls, d: dict) -> "CurriculumSchedule":
        try:
            return cls(d["name"], [PhaseSpec.from_dict(p) for p in d["phases"]], PhaseSpec.from_dict(d["warmup"]))
        except (KeyError, TypeError) as exc:
            raise CurriculumError(f"malformed schedule: {exc}") from exc

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")

    @classmethod
    def load(cls, path) -> "CurriculumSchedule":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def sequence(self, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
        """(kind index, phase index) for every game, cached per seed."""
        if seed not in self._sequences:
            kinds, phases = [], []
            for i, phase in enumerate(self.all_phases):
                order = interleave(phase, seed * 1009 + i)
                kinds.append(order)
                phases.append(np.full(len(order), i, dtype=np.int64))
            self._sequences[seed] = (np.concatenate(kinds), np.concatenate(phases))
        return self._sequences[seed]


def interleave(phase: PhaseSpec, seed: int = 0) -> np.ndarray:
    """Kind indices (into ``KINDS``) for every game of ``phase``, in play order."""
    rank = np.random.default_rng(seed).permutation(len(KINDS))
    keys_pos, keys_rank, kinds = [], [], []
    for ki, kind in enumerate(KINDS):
        quota = phase.counts.get(kind, 0)
        if quota <= 0:
            continue
        j = np.arange(quota, dtype=np.float64)
        keys_pos.append(j / quota)
        keys_rank.append(np.full(quota, rank[ki]))
        kinds.append(np.full(quota, ki, dtype=np.int64))
    if not kinds:
        return np.zeros(0, dtype=np.int64)
    pos = np.concatenate(keys_pos)
    rk = np.concatenate(keys_rank)
    order = np.lexsort((rk, pos))
    return np.concatenate(kinds)[order]


PRESET_NAMES = ("agent0", "agent20", "agent40", "agent60", "focus", "incrm")


def _mixed(each: int) -> dict:
    return {k: each for k in KINDS}


def preset(name: str) -> CurriculumSchedule:
    K = OpponentKind
    table = {
        "agent0": [_mixed(23750)],
        "agent20": [{K.ST: 20000}, _mixed(18750)],
        "agent40": [{K.ST: 40000}, _mixed(13750)],
        "agent60": [{K.ST: 60000}, _mixed(8750)],
        "focus": [{K.ST: 23750}, {K.SS: 23750}, {K.SS_NB: 23750}, {K.EXT: 23750}],
        "incrm": [
            {K.ST: 6000},
            {K.ST: 5800, K.SS: 8000},
            {K.ST: 6000, K.SS: 8000, K.SS_NB: 11600},
            {K.ST: 6200, K.SS: 7800, K.SS_NB: 11600, K.EXT: 24000},
        ],
    }
    if name not in table:
        raise CurriculumError(f"unknown preset {name!r}; choose from {', '.join(PRESET_NAMES)}")
    return CurriculumSchedule(name, [PhaseSpec(c) for c in table[name]])


@dataclass(frozen=True)
class Violation:
    code: str
    message: str

    def __str__(self):
        return f"{self.code}: {self.message}"


def validate(schedule: CurriculumSchedule) -> Optional[Violation]:
    """None when the schedule is usable, else the first problem found."""
    for i, phase in enumerate(schedule.all_phases):
        label = "warmup" if i == 0 else f"phase {i}"
        for kind, n in phase.counts.items():
            if n < 0:
                return Violation("negative_count", f"{label} has {n} games against {kind.value}")
        if phase.total <= 0:
            return Violation("empty_phase", f"{label} has no games")
    if schedule.warmup.total != WARMUP_GAMES:
        return Violation("warmup_size", f"warmup has {schedule.warmup.total} games, expected {WARMUP_GAMES}")
    if not schedule.warmup.value_only:
        return Violation("warmup_flag", "warmup must be value-only")
    training = sum(p.total for p in schedule.phases)
    if training != TRAINING_BUDGET:
        return Violation("budget_mismatch", f"phases sum to {training} games, expected {TRAINING_BUDGET}")
    return None


def next_opponent(schedule: CurriculumSchedule, games_played: int, seed: int = 0):
    """``(OpponentKind, value_only)`` for game number ``games_played``."""
    kinds, phases = schedule.sequence(seed)
    if games_played < 0:
        raise CurriculumError("games_played must be >= 0")
    if games_played >= len(kinds):
        raise BudgetExhausted(f"schedule {schedule.name!r} has only {len(kinds)} games")
    phase = schedule.all_phases[int(phases[games_played])]
    return KINDS[int(kinds[games_played])], phase.value_only


def phase_index(schedule: CurriculumSchedule, games_played: int, seed: int = 0) -> int:
    return int(schedule.sequence(seed)[1][games_played])


def tally(schedule: CurriculumSchedule, games: Optional[int] = None, seed: int = 0) -> dict:
    """Per-kind counts over the first ``games`` assignments (all by default)."""
    kinds, _ = schedule.sequence(seed)
    kinds = kinds if games is None else kinds[:games]
    counts = np.bincount(kinds, minlength=len(KINDS))
    return {k: int(counts[i]) for i, k in enumerate(KINDS)}


def phase_tallies(schedule: CurriculumSchedule, seed: int = 0) -> list[dict]:
    kinds, phases = schedule.sequence(seed)
    out = []
    for i in range(len(schedule.all_phases)):
        counts = np.bincount(kinds[phases == i], minlength=len(KINDS))
        out.append({k: int(counts[j]) for j, k in enumerate(KINDS) if counts[j]})
    return out


class ScheduleCursor:
    """Hands out consecutive blocks of opponent assignments.

    Reservation is atomic, so concurrent collectors never share a game index.
    """

    def __init__(self, schedule: CurriculumSchedule, seed: int = 0, start: int = 0, limit: Optional[int] = None):
        self.schedule = schedule
        self.seed = seed
        self.position = start
        total = schedule.total_games
        self.limit = total if limit is None else min(limit, total)
        self._lock = threading.Lock()

    def remaining(self) -> int:
        return max(0, self.limit - self.position)

    def reserve(self, n: int) -> list[tuple[int, OpponentKind, bool, int]]:
        """Up to ``n`` tuples ``(game_index, kind, value_only, phase)``; empty when done."""
        with self._lock:
            start = self.position
            stop = min(self.limit, start + n)
            self.position = stop
        kinds, phases = self.schedule.sequence(self.seed)
        all_phases = self.schedule.all_phases
        return [
            (g, KINDS[int(kinds[g])], all_phases[int(phases[g])].value_only, int(phases[g]))
            for g in range(start, stop)
        ]
