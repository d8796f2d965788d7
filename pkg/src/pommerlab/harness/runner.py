"""Single-episode rollout with reward tracking for the learning team."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..agents.external import ExternalPolicyError
from ..agents.policy import Agent, PolicyHandle, make_agent
from ..engine import EpisodeRecord, MatchConfig, new_game, observe, step
from ..engine.constants import TEAMS
from ..tracker import RewardTracker

log = logging.getLogger(__name__)

TEAM_SEATS = TEAMS[0]  # (0, 2): the learning / evaluated team
OPPONENT_SEATS = TEAMS[1]


def episode_seed(base_seed: int, episode_id: int) -> int:
    """Engine seed for one episode; distinct for distinct ids within a run."""
    if not 0 <= episode_id < 2**32:
        raise ValueError("episode_id must fit in 32 bits")
    return int(base_seed) * 2**32 + int(episode_id)


@dataclass
class Trajectory:
    """One team agent's view of an episode, aligned with the record's steps."""

    episode_id: int
    agent_id: int
    actions: list = field(default_factory=list)
    T: list = field(default_factory=list)
    total: list = field(default_factory=list)
    E: float = 0.0
    K: float = 0.0
    value_only: bool = False

    @property
    def length(self) -> int:
        return len(self.actions)

    @property
    def return_(self) -> float:
        return float(sum(self.total))

    def to_dict(self) -> dict:
        return {"T": self.T, "total": self.total, "E": self.E, "K": self.K}


class SeatPool:
    """Agent objects per (seat, handle), reused across episodes in one process."""

    def __init__(self):
        self._agents: dict = {}

    def get(self, seat: int, handle: PolicyHandle) -> Agent:
        key = (seat, handle)
        if key not in self._agents:
            self._agents[key] = make_agent(handle)
        return self._agents[key]

    def close(self) -> None:
        for agent in self._agents.values():
            agent.close()
        self._agents.clear()


_DEFAULT_POOL = SeatPool()


def run_episode(
    team: Sequence[PolicyHandle] | PolicyHandle,
    opponents: Sequence[PolicyHandle] | PolicyHandle,
    seed: int,
    config: Optional[MatchConfig] = None,
    episode_id: int = 0,
    pool: Optional[SeatPool] = None,
    value_only: bool = False,
    extras: Optional[dict] = None,
) -> EpisodeRecord:
    """Play one game of ``team`` (ids 0, 2) against ``opponents`` (ids 1, 3).

    The returned record carries per-agent reward series for the team, every
    agent's position series and any external-policy faults in ``extras``.
    An external endpoint crash ends the game early; the record is then marked
    ``aborted`` with the diagnostic and has no result.
    """
    config = config or MatchConfig()
    pool = pool or _DEFAULT_POOL
    team = _pair(team)
    opponents = _pair(opponents)
    handles = [team[0], opponents[0], team[1], opponents[1]]

    state = new_game(seed, config)
    record = EpisodeRecord(
        seed=seed,
        config=config,
        episode_id=episode_id,
        team=_label(team),
        opponent=_label(opponents),
    )
    agents = [pool.get(i, h) for i, h in enumerate(handles)]
    positions = {i: [list(state.agents[i].position)] for i in range(4)}
    obs = [observe(state, i) for i in range(4)]
    trackers = {}
    trajectories = {}
    for i in TEAM_SEATS:
        trackers[i] = RewardTracker(i, config)
        trackers[i].reset(obs[i])
        trajectories[i] = Trajectory(episode_id, i, value_only=value_only)

    try:
        for i, agent in enumerate(agents):
            agent.reset(i, seed, config)
        while state.result is None:
            actions = [agents[i].act(obs[i]) if obs[i].alive else 0 for i in range(4)]
            state, _, result = step(state, actions)
            record.actions.append(tuple(int(a) for a in actions))
            obs = [observe(state, i) for i in range(4)]
            for i in range(4):
                positions[i].append([state.agents[i].row, state.agents[i].col])
            for i in TEAM_SEATS:
                row = trackers[i].step(obs[i], actions[i], result)
                tr = trajectories[i]
                tr.actions.append(int(actions[i]))
                tr.T.append(row.T)
                tr.total.append(row.total)
                if row.terminal:
                    tr.E, tr.K = row.E, row.K
    except ExternalPolicyError as exc:
        log.error("episode %d aborted at step %d: %s", episode_id, state.step, exc)
        record.aborted = f"step {state.step}: {exc}"
        for agent in agents:
            if hasattr(agent, "endpoint"):
                agent.endpoint.close()
    else:
        for i, agent in enumerate(agents):
            agent.episode_end(state.result.for_team(i % 2))

    record.result = state.result
    record.final_hash = state.hash()
    record.extras = {
        "rewards": {str(i): trajectories[i].to_dict() for i in TEAM_SEATS},
        "positions": {str(i): positions[i] for i in range(4)},
        "faults": {str(i): [f.__dict__ for f in agents[i].faults] for i in range(4) if agents[i].faults},
        "value_only": value_only,
    }
    if extras:
        record.extras.update(extras)
    return record


def trajectories_of(record: EpisodeRecord) -> list[Trajectory]:
    """Rebuild the team's ``Trajectory`` objects from a record's extras."""
    out = []
    rewards = record.extras.get("rewards", {})
    for key in sorted(rewards, key=int):
        r = rewards[key]
        aid = int(key)
        out.append(
            Trajectory(
                record.episode_id,
                aid,
                [a[aid] for a in record.actions],
                list(r["T"]),
                list(r["total"]),
                r["E"],
                r["K"],
                bool(record.extras.get("value_only", False)),
            )
        )
    return out


def _pair(p) -> tuple[PolicyHandle, PolicyHandle]:
    if isinstance(p, PolicyHandle):
        return (p, p)
    p = tuple(p)
    if len(p) != 2:
        raise ValueError("a team needs exactly two policies")
    return p


def _label(pair) -> str:
    kinds = {h.kind for h in pair}
    return "/".join(sorted(kinds))
