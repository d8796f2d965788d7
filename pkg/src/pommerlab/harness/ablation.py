"""Starting-stat perturbations for the playing team."""

from __future__ import annotations

import warnings
from typing import Optional

from ..engine import MatchConfig

AMMO_VALUES = (1, 3, 5, 8)
BLAST_VALUES = (2, 5, 8)


def ablation_config(ammo: int = 1, blast: int = 2, base: Optional[MatchConfig] = None) -> MatchConfig:
    """``base`` with team 0 starting on ``ammo`` bombs of strength ``blast``.

    Opponents keep the base values. Values outside the studied sets are
    accepted with a warning.
    """
    base = base or MatchConfig()
    if ammo not in AMMO_VALUES:
        warnings.warn(f"ammo={ammo} is outside the studied values {AMMO_VALUES}", stacklevel=2)
    if blast not in BLAST_VALUES:
        warnings.warn(f"blast={blast} is outside the studied values {BLAST_VALUES}", stacklevel=2)
    return base.replace(initial_ammo_team0=int(ammo), initial_blast_team0=int(blast))


def ablation_grid(base: Optional[MatchConfig] = None) -> dict:
    """Every one-factor perturbation, keyed ``(ammo, blast)``."""
    out = {}
    for a in AMMO_VALUES:
        out[(a, 2)] = ablation_config(a, 2, base)
    for b in BLAST_VALUES:
        out[(1, b)] = ablation_config(1, b, base)
    return out


def shaping_config(enabled: bool, base: Optional[MatchConfig] = None) -> MatchConfig:
    return (base or MatchConfig()).replace(reward_shaping_enabled=bool(enabled))
