"""Head-to-head evaluation of one team policy against a set of opponent kinds."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

from ..agents.policy import OpponentKind, PolicyHandle
from ..engine import EpisodeRecord, MatchConfig
from .parallel import EpisodeJob, run_jobs
from .runner import episode_seed

DEFAULT_OPPONENTS = ("ST", "SS", "SS_NB", "EXT")
GAMES_PER_OPPONENT = 500
CSV_COLUMNS = ("opponent", "games", "wins", "losses", "ties", "aborted", "W", "L", "T")


@dataclass
class OpponentRow:
    opponent: str
    wins: int = 0
    losses: int = 0
    ties: int = 0
    aborted: int = 0

    @property
    def games(self) -> int:
        """Completed games; aborted ones are reported but not in the ratios."""
        return self.wins + self.losses + self.ties

    def ratio(self, n: int) -> float:
        return n / self.games if self.games else 0.0

    @property
    def W(self) -> float:
        return self.ratio(self.wins)

    @property
    def L(self) -> float:
        return self.ratio(self.losses)

    @property
    def T(self) -> float:
        return self.ratio(self.ties)

    def add(self, record: EpisodeRecord, team: int = 0) -> None:
        if record.aborted or record.result is None:
            self.aborted += 1
            return
        outcome = record.result.for_team(team)
        if outcome == "win":
            self.wins += 1
        elif outcome == "loss":
            self.losses += 1
        else:
            self.ties += 1

    def to_dict(self) -> dict:
        return {
            "opponent": self.opponent,
            "games": self.games,
            "wins": self.wins,
            "losses": self.losses,
            "ties": self.ties,
            "aborted": self.aborted,
            "W": round(self.W, 6),
            "L": round(self.L, 6),
            "T": round(self.T, 6),
        }


@dataclass
class EvalReport:
    team: str
    base_seed: int
    games_per_opponent: int
    rows: list = field(default_factory=list)

    def row(self, opponent) -> OpponentRow:
        name = OpponentKind.parse(opponent).value
        for r in self.rows:
            if r.opponent == name:
                return r
        raise KeyError(name)

    @property
    def total_games(self) -> int:
        return sum(r.games + r.aborted for r in self.rows)

    def averages(self) -> dict:
        """Unweighted mean of the per-opponent ratios."""
        if not self.rows:
            return {"W": 0.0, "L": 0.0, "T": 0.0}
        n = len(self.rows)
        return {k: round(sum(getattr(r, k) for r in self.rows) / n, 6) for k in ("W", "L", "T")}

    def to_dict(self) -> dict:
        return {
            "team": self.team,
            "base_seed": self.base_seed,
            "games_per_opponent": self.games_per_opponent,
            "rows": [r.to_dict() for r in self.rows],
            "average": self.averages(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in self.rows:
            w.writerow(r.to_dict())
        avg = self.averages()
        w.writerow({"opponent": "average", "games": sum(r.games for r in self.rows),
                    "wins": "", "losses": "", "ties": "",
                    "aborted": sum(r.aborted for r in self.rows), **avg})
        return buf.getvalue()

    def write(self, out_dir) -> tuple[Path, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        js, cs = out / "eval_report.json", out / "eval_report.csv"
        js.write_text(self.to_json())
        cs.write_text(self.to_csv())
        return js, cs

    def table(self) -> str:
        lines = [f"{'opponent':<8} {'games':>6} {'W':>7} {'L':>7} {'T':>7}"]
        for r in self.rows:
            lines.append(f"{r.opponent:<8} {r.games:>6} {r.W:>7.3f} {r.L:>7.3f} {r.T:>7.3f}")
        return "\n".join(lines)


def tournament_jobs(
    team: PolicyHandle,
    opponents: Sequence,
    games_per_opponent: int,
    base_seed: int,
    config: MatchConfig,
) -> list[EpisodeJob]:
    """Episode ids run opponent-major, so every game gets its own seed."""
    jobs = []
    for k, opp in enumerate(opponents):
        handle = opp if isinstance(opp, PolicyHandle) else PolicyHandle(opp)
        for g in range(games_per_opponent):
            eid = k * games_per_opponent + g
            jobs.append(EpisodeJob(eid, episode_seed(base_seed, eid), team, handle, config))
    return jobs


def run_tournament(
    team: PolicyHandle | str,
    opponents: Iterable = DEFAULT_OPPONENTS,
    games_per_opponent: int = GAMES_PER_OPPONENT,
    base_seed: int = 0,
    config: Optional[MatchConfig] = None,
    workers: int = 1,
    records_out=None,
    progress=None,
) -> EvalReport:
    """Play ``games_per_opponent`` games against each opponent kind.

    ``records_out``, when given, is a directory that receives one record file
    per episode. ``progress`` is called with the count of finished games.
    """
    if games_per_opponent < 0:
        raise ValueError("games_per_opponent must be >= 0")
    team = team if isinstance(team, PolicyHandle) else PolicyHandle(team)
    opponents = [o if isinstance(o, PolicyHandle) else PolicyHandle(o) for o in opponents]
    config = config or MatchConfig()
    report = EvalReport(team.kind, base_seed, games_per_opponent)
    rows = {}
    for opp in opponents:
        rows[opp.kind] = OpponentRow(opp.kind)
        report.rows.append(rows[opp.kind])
    jobs = tournament_jobs(team, opponents, games_per_opponent, base_seed, config)
    by_id = {j.episode_id: j for j in jobs}
    for done, record in enumerate(run_jobs(jobs, workers), 1):
        rows[by_id[record.episode_id].opponent.kind].add(record)
        if records_out is not None:
            record.save(Path(records_out) / f"episode_{record.episode_id:06d}.jsonl")
        if progress is not None:
            progress(done)
    return report
