"""Builders for hand-made game states used across the tests."""

import numpy as np

from pommerlab.engine import AgentEntity, Bomb, GameState, MatchConfig, START_POSITIONS


def make_state(agents=None, bombs=(), walls=None, hidden=None, flames=None, config=None, step=0):
    """An open 11x11 board with the given pieces.

    ``agents`` maps id -> dict(row, col, ammo, blast, kick, alive); ids left
    out sit on their start corners. ``walls`` maps (r, c) -> Cell code.
    ``bombs`` are tuples (row, col, owner, fuse, strength[, moving_dir]).
    """
    config = config or MatchConfig()
    board = np.zeros((11, 11), dtype=np.int8)
    for (r, c), kind in (walls or {}).items():
        board[r, c] = int(kind)
    hid = np.zeros_like(board)
    for (r, c), kind in (hidden or {}).items():
        hid[r, c] = int(kind)
    fl = np.zeros_like(board)
    for (r, c), ttl in (flames or {}).items():
        fl[r, c] = ttl
    specs = dict(agents or {})
    ents = []
    for i in range(4):
        d = specs.get(i, {})
        r, c = d.get("pos", START_POSITIONS[i])
        ents.append(AgentEntity(i, r, c, d.get("ammo", 1), d.get("blast", 2), d.get("kick", False), d.get("alive", True)))
    bl = []
    for k, b in enumerate(bombs):
        r, c, owner, fuse, strength = b[:5]
        moving = b[5] if len(b) > 5 else 0
        bl.append(Bomb(k, r, c, owner, fuse, strength, moving, bool(moving)))
    return GameState(step, board, hid, ents, bl, fl, config, 0, np.random.default_rng(0), len(bl))


def flame_cells(state):
    return {(int(r), int(c)) for r, c in zip(*np.nonzero(state.flames))}


def positions(state):
    return [a.position for a in state.agents]


def tracker_suite(n_games, first_seed=0):
    """Play SS-vs-SS games, tracking every agent at full and default view.

    Ground truth for agent i is the set of (step, victim) pairs where an
    unkicked bomb of i's killed someone else while i was still alive.
    Returns counts: full-view mismatches, default-view false positives,
    default-view misses and ground-truth kills.
    """
    from pommerlab import tracker as tk
    from pommerlab.agents import PolicyHandle, make_agent
    from pommerlab.engine import new_game, observe, step

    full_bad = false_pos = missed = truth = 0
    agents = [make_agent(PolicyHandle("SS")) for _ in range(4)]
    for seed in range(first_seed, first_seed + n_games):
        cfg = MatchConfig()
        s = new_game(seed, cfg)
        for i, a in enumerate(agents):
            a.reset(i, seed, cfg)
        obs = [observe(s, i) for i in range(4)]
        full = [tk.TrackerState.start(observe(s, i, 10)) for i in range(4)]
        part = [tk.TrackerState.start(o) for o in obs]
        gt = [set() for _ in range(4)]
        while s.result is None:
            acts = [agents[i].act(obs[i]) for i in range(4)]
            alive_before = [a.alive for a in s.agents]
            s, ev, _ = step(s, acts)
            for d in ev.deaths:
                for _, owner, kicked in d.killers:
                    if not kicked and owner != d.agent_id and alive_before[owner]:
                        gt[owner].add((s.step, d.agent_id))
            obs = [observe(s, i) for i in range(4)]
            for i in range(4):
                tk.update(full[i], observe(s, i, 10), acts[i])
                tk.update(part[i], obs[i], acts[i])
        for i in range(4):
            f = {(k.step, k.victim) for k in full[i].kills}
            p = {(k.step, k.victim) for k in part[i].kills}
            full_bad += len(f ^ gt[i])
            false_pos += len(p - gt[i])
            missed += len(gt[i] - p)
            truth += len(gt[i])
    return full_bad, false_pos, missed, truth


def jitter_oracle(positions, threshold):
    """Flags by definition: union of every qualifying window longer than ``threshold``.

    A window qualifies when all its positions are equal, or when it
    alternates strictly between two adjacent cells.
    """
    x = [tuple(p) for p in positions]
    n = len(x)
    flags = [False] * n

    def dormant(s, e):
        return all(x[k] == x[s] for k in range(s, e + 1))

    def alternating(s, e):
        if e == s or abs(x[s][0] - x[s + 1][0]) + abs(x[s][1] - x[s + 1][1]) != 1:
            return False
        return all(x[k] == x[s + (k - s) % 2] for k in range(s, e + 1))

    for s in range(n):
        for test in (dormant, alternating):
            # Qualifying windows from s form a prefix; find its far end.
            e = s
            while e + 1 < n and test(s, e + 1):
                e += 1
            if test(s, e) and e - s + 1 > threshold:
                for k in range(s, e + 1):
                    flags[k] = True
    return flags


def synthetic_series(rng, max_len=260):
    """Concatenated segments of standing, alternating, walking and jumping."""
    n_target = rng.randrange(1, max_len)
    r, c = rng.randrange(11), rng.randrange(11)
    out = [(r, c)]
    while len(out) < n_target:
        kind = rng.random()
        k = rng.choice([1, 2, 5, 20, 38, 39, 40, 41, 42, 45, 60, 90])
        if kind < 0.3:
            out += [(r, c)] * k
        elif kind < 0.6:
            dr, dc = rng.choice([(0, 1), (1, 0), (0, -1), (-1, 0)])
            other = (r + dr, c + dc)
            for j in range(k):
                out.append(other if j % 2 == 0 else (r, c))
            r, c = out[-1]
        elif kind < 0.9:
            for _ in range(k):
                dr, dc = rng.choice([(0, 1), (1, 0), (0, -1), (-1, 0)])
                r, c = r + dr, c + dc
                out.append((r, c))
        else:
            r, c = r + rng.choice([2, 3, -2]), c + rng.choice([0, 1])
            out.append((r, c))
    return out[:n_target]


def gae_oracle(rewards, values, gamma, lam):
    """Advantage as the explicit sum of discounted TD errors."""
    n = len(rewards)
    delta = [rewards[t] + gamma * values[t + 1] - values[t] for t in range(n)]
    return [sum((gamma * lam) ** (k - t) * delta[k] for k in range(t, n)) for t in range(n)]


def mc_advantage(rewards, values, gamma):
    """Discounted return to the end plus bootstrapped tail, minus the baseline."""
    n = len(rewards)
    return [
        sum(gamma ** (k - t) * rewards[k] for k in range(t, n)) + gamma ** (n - t) * values[n] - values[t]
        for t in range(n)
    ]
