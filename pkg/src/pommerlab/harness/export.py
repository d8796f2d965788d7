"""(observation, action) datasets for offline imitation learning.

Every exported agent contributes one row per step, holding the observation
it acted on, the action taken and the tracker reward that followed, plus a
closing row with the final observation (``action`` is null there). The
closing row carries the game result so rewards can be recomputed from the
file alone.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

from ..engine import EpisodeRecord, GameResult, MatchConfig, Observation, observe, replay
from ..tracker import RewardTracker

FORMATS = ("jsonl", "csv")
CSV_COLUMNS = ("episode_id", "agent_id", "step", "action", "reward", "final", "result", "obs")


@dataclass
class TrajectoryRow:
    episode_id: int
    agent_id: int
    step: int
    obs: Observation
    action: Optional[int]
    reward: Optional[float]
    final: bool = False
    result: Optional[GameResult] = None

    def to_dict(self) -> dict:
        return {
            "episode_id": self.episode_id,
            "agent_id": self.agent_id,
            "step": self.step,
            "action": self.action,
            "reward": self.reward,
            "final": self.final,
            "result": None if self.result is None else self.result.to_dict(),
            "obs": self.obs.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TrajectoryRow":
        return cls(
            int(d["episode_id"]),
            int(d["agent_id"]),
            int(d["step"]),
            Observation.from_dict(d["obs"]),
            None if d["action"] is None else int(d["action"]),
            None if d["reward"] is None else float(d["reward"]),
            bool(d["final"]),
            None if d["result"] is None else GameResult.from_dict(d["result"]),
        )


def trajectory_rows(record: EpisodeRecord, agent_ids: Sequence[int] = (0, 2)) -> list[TrajectoryRow]:
    _, _, states = replay(record, keep_states=True)
    rows = []
    for aid in agent_ids:
        obs = [observe(s, aid) for s in states]
        tracker = RewardTracker(aid, record.config)
        tracker.reset(obs[0])
        last = len(record.actions) - 1
        for t, joint in enumerate(record.actions):
            res = record.result if t == last else None
            r = tracker.step(obs[t + 1], joint[aid], res)
            rows.append(TrajectoryRow(record.episode_id, aid, t, obs[t], int(joint[aid]), r.total))
        rows.append(TrajectoryRow(record.episode_id, aid, len(record.actions), obs[-1], None, None, True, record.result))
    return rows


def export_trajectories(
    records: Iterable[EpisodeRecord],
    path,
    format: str = "jsonl",
    agent_ids: Sequence[int] = (0, 2),
) -> int:
    """Write the dataset to ``path``; returns the number of (obs, action) pairs."""
    if format not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pairs = 0
    with path.open("w", newline="") as fh:
        writer = None
        if format == "csv":
            writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
            writer.writeheader()
        for rec in records:
            for row in trajectory_rows(rec, agent_ids):
                pairs += row.action is not None
                d = row.to_dict()
                if writer is None:
                    fh.write(json.dumps(d, separators=(",", ":")) + "\n")
                else:
                    d["obs"] = json.dumps(d["obs"], separators=(",", ":"))
                    d["result"] = "" if d["result"] is None else json.dumps(d["result"])
                    d["action"] = "" if d["action"] is None else d["action"]
                    d["reward"] = "" if d["reward"] is None else repr(d["reward"])
                    d["final"] = int(d["final"])
                    writer.writerow(d)
    return pairs


def load_trajectories(path, format: Optional[str] = None) -> list[TrajectoryRow]:
    path = Path(path)
    format = format or ("csv" if path.suffix == ".csv" else "jsonl")
    rows = []
    with path.open(newline="") as fh:
        if format == "csv":
            for d in csv.DictReader(fh):
                rows.append(TrajectoryRow.from_dict({
                    **d,
                    "obs": json.loads(d["obs"]),
                    "result": json.loads(d["result"]) if d["result"] else None,
                    "action": int(d["action"]) if d["action"] != "" else None,
                    "reward": float(d["reward"]) if d["reward"] != "" else None,
                    "final": d["final"] == "1",
                }))
        else:
            for line in fh:
                if line.strip():
                    rows.append(TrajectoryRow.from_dict(json.loads(line)))
    return rows


def pairs(rows: Iterable[TrajectoryRow]) -> list[tuple[Observation, int]]:
    return [(r.obs, r.action) for r in rows if r.action is not None]


def recompute_rewards(rows: Sequence[TrajectoryRow], config: Optional[MatchConfig] = None) -> dict:
    """Tracker rewards per ``(episode_id, agent_id)`` rebuilt from exported rows."""
    groups: dict = {}
    for r in rows:
        groups.setdefault((r.episode_id, r.agent_id), []).append(r)
    out = {}
    for key, seq in groups.items():
        seq.sort(key=lambda r: r.step)
        tracker = RewardTracker(key[1], config)
        tracker.reset(seq[0].obs)
        result = seq[-1].result
        series = []
        for t in range(len(seq) - 1):
            last = t == len(seq) - 2
            series.append(tracker.step(seq[t + 1].obs, seq[t].action, result if last else None).total)
        out[key] = series
    return out
