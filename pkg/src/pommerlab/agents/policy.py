"""Opponent kinds, policy handles and the per-seat agent objects built from them."""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from ..engine.config import MatchConfig
from ..engine.observe import Observation
from .external import ExternalEndpoint
from .scripted import (
    act_simple,
    act_smart_simple,
    act_smart_simple_nobomb,
    act_static,
)

DEFAULT_BUDGET_MS = 100.0


class OpponentKind(Enum):
    ST = "ST"
    SS = "SS"
    SS_NB = "SS_NB"
    EXT = "EXT"

    @property
    def display_name(self) -> str:
        return _DISPLAY[self]

    @classmethod
    def parse(cls, name) -> "OpponentKind":
        if isinstance(name, OpponentKind):
            return name
        key = str(name).strip().upper().replace("-", "_")
        key = _ALIASES.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown opponent {name!r}; choose from {', '.join(k.value for k in cls)}") from None


_DISPLAY = {
    OpponentKind.ST: "Static",
    OpponentKind.SS: "Smart Simple",
    OpponentKind.SS_NB: "Smart Simple NoBomb",
    OpponentKind.EXT: "External (PPO-18 slot)",
}
_ALIASES = {"PPO_18": "EXT", "PPO18": "EXT", "SSNB": "SS_NB", "STATIC": "ST"}

# Policies that may play on the learning team in addition to the opponent kinds.
TEAM_POLICIES = ("ST", "SS", "SS_NB", "EXT", "SIMPLE", "HUNTER")


@dataclass(frozen=True)
class PolicyHandle:
    """What to seat: a kind, a seed for its RNG stream and, for EXT, an endpoint.

    An EXT handle without an endpoint plays the built-in hunter variant of
    Smart Simple (bomb rules ahead of powerups).
    """

    kind: str
    rng_seed: int = 0
    endpoint: Optional[str | tuple] = None
    budget_ms: float = DEFAULT_BUDGET_MS

    def __post_init__(self):
        kind = str(self.kind).strip().upper().replace("-", "_")
        if kind not in TEAM_POLICIES:
            kind = OpponentKind.parse(kind).value
        object.__setattr__(self, "kind", kind)
        if isinstance(self.endpoint, list):
            object.__setattr__(self, "endpoint", tuple(self.endpoint))
        if self.budget_ms <= 0:
            raise ValueError("budget_ms must be positive")

    @property
    def is_external(self) -> bool:
        return self.kind == "EXT" and self.endpoint is not None

    def to_dict(self) -> dict:
        ep = list(self.endpoint) if isinstance(self.endpoint, tuple) else self.endpoint
        return {"kind": self.kind, "rng_seed": self.rng_seed, "endpoint": ep, "budget_ms": self.budget_ms}


class Agent:
    """A seat at the table; ``reset`` once per episode, then ``act`` per step."""

    def __init__(self, handle: PolicyHandle):
        self.handle = handle
        self.agent_id = -1
        self.rng = random.Random(0)
        self.config = MatchConfig()

    def reset(self, agent_id: int, episode_seed: int, config: MatchConfig) -> None:
        self.agent_id = agent_id
        self.config = config
        self.rng = random.Random(f"{self.handle.rng_seed}/{episode_seed}/{agent_id}")

    def act(self, obs: Observation) -> int:
        raise NotImplementedError

    def episode_end(self, result: str) -> None:
        pass

    def close(self) -> None:
        pass

    @property
    def faults(self) -> list:
        return []


class ScriptedAgent(Agent):
    def act(self, obs: Observation) -> int:
        if not obs.alive:
            return 0
        kind = self.handle.kind
        kw = {"bomb_life": self.config.bomb_life, "flame_life": self.config.flame_life}
        if kind == "ST":
            return act_static(obs)
        if kind == "SS":
            return act_smart_simple(obs, self.rng, **kw)
        if kind == "SS_NB":
            return act_smart_simple_nobomb(obs, self.rng, **kw)
        if kind == "SIMPLE":
            return act_simple(obs, self.rng, **kw)
        # HUNTER, or EXT with nothing to call out to.
        return act_smart_simple(obs, self.rng, hunter=True, **kw)


class ExternalAgent(Agent):
    def __init__(self, handle: PolicyHandle):
        super().__init__(handle)
        self.endpoint = ExternalEndpoint(handle.endpoint, handle.budget_ms)

    def reset(self, agent_id, episode_seed, config):
        super().reset(agent_id, episode_seed, config)
        self.endpoint.init(agent_id, config.to_dict())

    def act(self, obs: Observation) -> int:
        return act_external(self, obs)

    def episode_end(self, result: str) -> None:
        self.endpoint.episode_end(result)

    def close(self) -> None:
        self.endpoint.close()

    @property
    def faults(self) -> list:
        return self.endpoint.faults


def act_external(agent: ExternalAgent, obs: Observation) -> int:
    """Ask the agent's endpoint for an action (Stop on timeout or bad reply)."""
    return agent.endpoint.act(obs.step, obs.to_dict())


def make_agent(handle: PolicyHandle) -> Agent:
    if handle.is_external:
        return ExternalAgent(handle)
    return ScriptedAgent(handle)


def make_agents(handles: Sequence[PolicyHandle]) -> list[Agent]:
    return [make_agent(h) for h in handles]
