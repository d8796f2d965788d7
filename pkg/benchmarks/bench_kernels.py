"""Compare the numba and pure-numpy kernel backends.

    python benchmarks/bench_kernels.py            # per-kernel timings
    python benchmarks/bench_kernels.py --games 20 # plus whole games per backend

Kernel timings call both implementations directly on the same inputs, so
one process covers both. Game timings run a subprocess per backend with
``POMMERLAB_BACKEND`` set, since the engine picks its backend at import.
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

from pommerlab.agents.scripted import _static_args
from pommerlab.engine import new_game, observe, step
from pommerlab.kernels import _jit, _np


def sample(n_games, seed=0):
    rng = np.random.default_rng(seed)
    out = []
    for g in range(n_games):
        s = new_game(seed * 1000 + g)
        while s.result is None and s.step < 200:
            s, _, _ = step(s, rng.choice([0, 1, 2, 3, 4, 5, 5], size=4).tolist())
            out.append(observe(s, int(rng.integers(4))))
    return [o for o in out if o.alive]


def kernel_cases(obs):
    cases = {"danger_windows": [], "simple_plan": [], "suicide_filter": [], "jitter_flags": [], "gae": []}
    for o in obs:
        grids = (o.board, o.bomb_strength, o.bomb_fuse, o.bomb_moving, o.agents, o.flames)
        r, c = o.position
        cases["danger_windows"].append(grids + (2,))
        enemies, rows, cols = _static_args(o.agent_id, o.enemy_ids, o.alive_ids)
        cases["simple_plan"].append(grids + (r, c, o.ammo, o.blast_strength, enemies, rows, cols, False, 10, 2))
        cases["suicide_filter"].append(grids + (r, c, o.agent_id, bool(o.can_kick), 2))
    rng = np.random.default_rng(1)
    for _ in range(200):
        n = 800
        cases["jitter_flags"].append((np.cumsum(rng.integers(-1, 2, n)), np.cumsum(rng.integers(-1, 2, n)), 40))
        cases["gae"].append((rng.normal(size=n), rng.normal(size=n + 1), 0.99, 0.95))
    return cases


def time_calls(fn, args_list, repeat):
    for a in args_list[:5]:
        fn(*a)  # compile / warm caches
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for a in args_list:
            fn(*a)
        best = min(best, time.perf_counter() - t0)
    return best / len(args_list)


GAME_SNIPPET = """
import json, sys, time
from pommerlab import kernels
from pommerlab.agents import PolicyHandle
from pommerlab.harness import run_episode
n = int(sys.argv[1])
run_episode(PolicyHandle("SS"), PolicyHandle("SS"), seed=10_000)
t0 = time.perf_counter()
steps = sum(run_episode(PolicyHandle("SS"), PolicyHandle("SS"), seed=s).length for s in range(n))
print(json.dumps({"backend": kernels.BACKEND, "seconds": time.perf_counter() - t0, "steps": steps}))
"""


def time_games(backend, n):
    env = dict(os.environ, POMMERLAB_BACKEND=backend)
    p = subprocess.run([sys.executable, "-c", GAME_SNIPPET, str(n)], env=env, capture_output=True, text=True, check=True)
    return json.loads(p.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sample-games", type=int, default=10)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--games", type=int, default=0, help="also time this many SS-vs-SS games per backend")
    args = ap.parse_args(argv)

    cases = kernel_cases(sample(args.sample_games))
    print(f"{'kernel':<16} {'calls':>6} {'numba us':>10} {'numpy us':>10} {'speedup':>8}")
    for name, arg_list in cases.items():
        tj = time_calls(getattr(_jit, name), arg_list, args.repeat)
        tn = time_calls(getattr(_np, name), arg_list, args.repeat)
        print(f"{name:<16} {len(arg_list):>6} {tj * 1e6:>10.1f} {tn * 1e6:>10.1f} {tn / tj:>7.1f}x")

    if args.games:
        print()
        print(f"{'backend':<8} {'games':>6} {'s/game':>8} {'steps/s':>9}")
        for backend in ("numba", "numpy"):
            r = time_games(backend, args.games)
            print(f"{r['backend']:<8} {args.games:>6} {r['seconds'] / args.games:>8.3f} {r['steps'] / r['seconds']:>9.0f}")


if __name__ == "__main__":
    main()
