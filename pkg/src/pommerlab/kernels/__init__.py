"""Hot grid kernels with a selectable backend.

``POMMERLAB_BACKEND=numpy`` forces the pure-numpy implementations; the
default is ``numba`` when it can be imported. Both backends return identical
results.
"""

import os

_requested = os.environ.get("POMMERLAB_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"POMMERLAB_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

if _requested == "numba":
    try:
        from . import _jit as _impl
    except ImportError:  # numba missing
        from . import _np as _impl
else:
    from . import _np as _impl

BACKEND = "numba" if _impl.__name__.endswith("_jit") else "numpy"

blast_mask = _impl.blast_mask
detonate = _impl.detonate
danger_windows = _impl.danger_windows
escape_moves = _impl.escape_moves
bfs = _impl.bfs
jitter_flags = _impl.jitter_flags
gae = _impl.gae
simple_plan = _impl.simple_plan
suicide_filter = _impl.suicide_filter

NEVER = 10000
PLAN_SURVIVE = _impl.PLAN_SURVIVE
PLAN_STEPS = _impl.PLAN_STEPS
PLAN_DANGER = _impl.PLAN_DANGER
PLAN_POWERUP = _impl.PLAN_POWERUP
PLAN_BOMB = _impl.PLAN_BOMB
PLAN_ENEMY = _impl.PLAN_ENEMY
PLAN_WOOD = _impl.PLAN_WOOD
PLAN_CORNER = _impl.PLAN_CORNER
PLAN_WANDER = _impl.PLAN_WANDER
PLAN_LETHAL = _impl.PLAN_LETHAL
PLAN_LEN = _impl.PLAN_LEN

__all__ = [
    "BACKEND",
    "NEVER",
    "blast_mask",
    "detonate",
    "danger_windows",
    "escape_moves",
    "bfs",
    "jitter_flags",
    "gae",
    "simple_plan",
    "suicide_filter",
]
