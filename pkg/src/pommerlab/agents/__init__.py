"""Scripted opponents, the suicide filter and the external-policy slot."""

from .external import EndpointCrashed, ExternalEndpoint, ExternalPolicyError, Fault
from .filter import ALL_ACTIONS, filter_actions
from .policy import (
    TEAM_POLICIES,
    Agent,
    ExternalAgent,
    OpponentKind,
    PolicyHandle,
    ScriptedAgent,
    act_external,
    make_agent,
    make_agents,
)
from .scripted import (
    act_simple,
    act_smart_simple,
    act_smart_simple_nobomb,
    act_static,
    preferences,
)

__all__ = [
    "ALL_ACTIONS",
    "Agent",
    "EndpointCrashed",
    "ExternalAgent",
    "ExternalEndpoint",
    "ExternalPolicyError",
    "Fault",
    "OpponentKind",
    "PolicyHandle",
    "ScriptedAgent",
    "TEAM_POLICIES",
    "act_external",
    "act_simple",
    "act_smart_simple",
    "act_smart_simple_nobomb",
    "act_static",
    "filter_actions",
    "make_agent",
    "make_agents",
    "preferences",
]
