"""Pure-numpy twins of the numba kernels.

Grid searches are written as mask dilations instead of queues; results are
defined set-wise so they match ``_jit.py`` exactly.
"""

import numpy as np

_RIGID = 1
_WOOD = 2
_FOG = -1
_NEVER = 10000

_DR = (0, -1, 0, 1, 0)
_DC = (0, 0, -1, 0, 1)


def _shift(mask, d):
    """Move every value one cell along action direction ``d``."""
    out = np.zeros_like(mask)
    if d == 1:
        out[:-1, :] = mask[1:, :]
    elif d == 3:
        out[1:, :] = mask[:-1, :]
    elif d == 2:
        out[:, :-1] = mask[:, 1:]
    elif d == 4:
        out[:, 1:] = mask[:, :-1]
    else:
        out[:] = mask
    return out


def _dilate(mask):
    out = mask.copy()
    out[1:, :] |= mask[:-1, :]
    out[:-1, :] |= mask[1:, :]
    out[:, 1:] |= mask[:, :-1]
    out[:, :-1] |= mask[:, 1:]
    return out


def blast_mask(board, r, c, strength):
    n = board.shape[0]
    out = np.zeros((n, n), dtype=bool)
    out[r, c] = True
    for d in range(1, 5):
        rr, cc = r, c
        for _ in range(1, strength):
            rr += _DR[d]
            cc += _DC[d]
            if not (0 <= rr < n and 0 <= cc < n):
                break
            kind = board[rr, cc]
            if kind == _RIGID or kind == _FOG:
                break
            out[rr, cc] = True
            if kind == _WOOD:
                break
    return out


def detonate(board, rows, cols, strengths, triggered):
    n = board.shape[0]
    nb = len(rows)
    exploded = np.asarray(triggered, dtype=bool).copy()
    rays = np.zeros((nb, n, n), dtype=bool)
    pending = list(np.flatnonzero(exploded))
    rows = np.asarray(rows)
    cols = np.asarray(cols)
    while pending:
        b = pending.pop(0)
        rays[b] = blast_mask(board, rows[b], cols[b], strengths[b])
        hit = rays[b][rows, cols] & ~exploded
        for o in np.flatnonzero(hit):
            exploded[o] = True
            pending.append(o)
    return exploded, rays


def danger_windows(board, strength, fuse, moving, agents, flames, flame_life):
    n = board.shape[0]
    br, bc = np.nonzero(strength > 0)
    nb = len(br)
    bs = strength[br, bc].astype(np.int64)
    be = fuse[br, bc].astype(np.int64)
    bd = moving[br, bc].astype(np.int64)
    open_kind = (board == 0) | (board >= 3)

    tr, tc = br.copy(), bc.copy()
    for b in np.flatnonzero(bd):
        rr, cc = br[b] + _DR[bd[b]], bc[b] + _DC[bd[b]]
        if not (0 <= rr < n and 0 <= cc < n):
            continue
        if open_kind[rr, cc] and strength[rr, cc] == 0 and agents[rr, cc] < 0:
            tr[b], tc[b] = rr, cc
    moved = (tr != br) | (tc != bc)
    pr, pc = br.copy(), bc.copy()
    for b in np.flatnonzero(moved):
        same = moved & (tr == tr[b]) & (tc == tc[b])
        if same.sum() == 1:
            pr[b], pc[b] = tr[b], tc[b]
    if nb:
        on_flame = (flames[pr, pc] >= 2) & (be > 1)
        be[on_flame] = 1

    rays = np.zeros((nb, n, n), dtype=bool)
    for b in range(nb):
        rays[b] = blast_mask(board, pr[b], pc[b], bs[b])
    if nb:
        covers = rays[:, pr, pc]  # covers[b, o]: bomb b's ray reaches bomb o
        np.fill_diagonal(covers, False)
        while True:
            candidate = np.where(covers, be[:, None], _NEVER).min(axis=0)
            new = np.minimum(be, candidate)
            if np.array_equal(new, be):
                break
            be = new

    lo = np.full((n, n), _NEVER, dtype=np.int16)
    hi = np.full((n, n), -1, dtype=np.int16)
    if nb:
        lo = np.where(rays, be[:, None, None], _NEVER).min(axis=0).astype(np.int16)
        hi = np.where(rays, (be + flame_life - 1)[:, None, None], -1).max(axis=0).astype(np.int16)
    lasting = flames >= 2
    lo = np.where(lasting, np.minimum(lo, 1), lo).astype(np.int16)
    hi = np.where(lasting, np.maximum(hi, flames.astype(np.int16) - 1), hi).astype(np.int16)
    return lo, hi


def escape_moves(passable, lo, hi, r0, c0):
    n = passable.shape[0]
    survive = np.zeros(5, dtype=bool)
    steps = np.full(5, -1, dtype=np.int16)
    horizon = max(1, int(hi.max()) + 1)
    for a in range(5):
        r1, c1 = r0 + _DR[a], c0 + _DC[a]
        if a > 0 and not (0 <= r1 < n and 0 <= c1 < n and passable[r1, c1]):
            continue
        if lo[r1, c1] <= 1 <= hi[r1, c1]:
            continue
        cur = np.zeros((n, n), dtype=bool)
        cur[r1, c1] = True
        t = 1
        while cur.any():
            if (cur & (hi < t)).any():
                survive[a] = True
                steps[a] = t
                break
            t += 1
            spread = _dilate(cur) & passable
            nxt = (cur | spread) & ~((lo <= t) & (t <= hi))
            cur = nxt
            if t > horizon + 1:
                break
    return survive, steps


def bfs(passable, r0, c0):
    n = passable.shape[0]
    dist = np.full((n, n), -1, dtype=np.int16)
    mask = np.zeros((n, n), dtype=np.int8)
    dist[r0, c0] = 0
    visited = np.zeros((n, n), dtype=bool)
    visited[r0, c0] = True
    # Layer 1 seeds one bit per first move.
    layer = np.zeros((n, n), dtype=bool)
    for d in range(1, 5):
        rr, cc = r0 + _DR[d], c0 + _DC[d]
        if 0 <= rr < n and 0 <= cc < n and passable[rr, cc]:
            layer[rr, cc] = True
            mask[rr, cc] |= np.int8(1 << (d - 1))
    depth = 1
    while layer.any():
        dist[layer] = depth
        visited |= layer
        nxt_mask = np.zeros((n, n), dtype=np.int8)
        for d in range(1, 5):
            moved = np.where(layer, mask, 0).astype(np.int8)
            nxt_mask |= _shift(moved, d)
        nxt = (nxt_mask != 0) & passable & ~visited
        mask = np.where(nxt, nxt_mask, mask).astype(np.int8)
        layer = nxt
        depth += 1
    first = np.full((n, n), -1, dtype=np.int8)
    for d in range(4, 0, -1):
        first[(mask & (1 << (d - 1))) != 0] = d
    first[dist < 0] = -1
    first[r0, c0] = 0
    return dist, first


def _runs(mask):
    """(start, end) index pairs of maximal True runs."""
    padded = np.concatenate(([False], mask, [False]))
    edges = np.flatnonzero(np.diff(padded.astype(np.int8)))
    return edges[0::2], edges[1::2] - 1


def jitter_flags(rows, cols, threshold):
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    n = len(rows)
    flags = np.zeros(n, dtype=bool)
    if n == 0:
        return flags
    cover = np.zeros(n + 1, dtype=np.int64)

    same = (rows[1:] == rows[:-1]) & (cols[1:] == cols[:-1])
    starts, ends = _runs(same)
    # same[i] links positions i and i+1
    lengths = ends - starts + 2
    keep = lengths > threshold
    np.add.at(cover, starts[keep], 1)
    np.add.at(cover, ends[keep] + 2, -1)
    if threshold < 1:
        flags[:] = True

    if n >= 2:
        adjacent = (np.abs(rows[1:] - rows[:-1]) + np.abs(cols[1:] - cols[:-1])) == 1
        starts, ends = _runs(adjacent)
        # Pair runs are the base of alternations; extend with the period-2 test.
        back2 = np.zeros(n, dtype=bool)
        back2[2:] = (rows[2:] == rows[:-2]) & (cols[2:] == cols[:-2])
        alt = back2[2:] & adjacent[1:]  # alt[i] checks positions i, i+1, i+2
        a_starts, a_ends = _runs(alt)
        a_len = a_ends - a_starts + 3
        keep = a_len > threshold
        np.add.at(cover, a_starts[keep], 1)
        np.add.at(cover, a_ends[keep] + 3, -1)
        if threshold < 2:
            np.add.at(cover, starts, 1)
            np.add.at(cover, ends + 2, -1)
    flags |= np.cumsum(cover)[:n] > 0
    return flags


def gae(rewards, values, gamma, lam):
    rewards = np.asarray(rewards, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    deltas = rewards + gamma * values[1:] - values[:-1]
    adv = np.zeros(len(rewards), dtype=np.float64)
    running = 0.0
    for t in range(len(rewards) - 1, -1, -1):
        running = deltas[t] + gamma * lam * running
        adv[t] = running
    return adv


PLAN_SURVIVE = 0
PLAN_STEPS = 5
PLAN_DANGER = 10
PLAN_POWERUP = 11
PLAN_BOMB = 12
PLAN_ENEMY = 13
PLAN_WOOD = 14
PLAN_CORNER = 15
PLAN_WANDER = 16
PLAN_LETHAL = 20  # any cell lethal one step ahead
PLAN_LEN = 21
_BIG = 1 << 30


def _open_kind(board):
    return (board == 0) | (board >= 3)


def _shift_any(mask):
    """Cells that have a True 4-neighbour."""
    out = np.zeros_like(mask)
    for d in range(1, 5):
        out |= _shift(mask, d)
    return out


def _toward(targets, dist, first, survive, dmin, dmax):
    ok = targets & (dist >= dmin) & (dist <= dmax)
    if not ok.any():
        return -1
    d = np.where(ok, dist, np.iinfo(np.int16).max)
    r, c = np.unravel_index(int(np.argmin(d)), d.shape)
    move = int(first[r, c])
    if move <= 0 or not survive[move]:
        return -1
    return move


def simple_plan(board, strength, fuse, moving, agents, flames, r0, c0, ammo, blast,
                enemies, corner_rows, corner_cols, hunter, bomb_life, flame_life):
    n = board.shape[0]
    plan = np.full(PLAN_LEN, -1, dtype=np.int64)
    passable = _open_kind(board) & (strength == 0) & (agents < 0)
    passable[r0, c0] = strength[r0, c0] == 0
    lo, hi = danger_windows(board, strength, fuse, moving, agents, flames, flame_life)
    survive, steps = escape_moves(passable, lo, hi, r0, c0)
    plan[PLAN_SURVIVE:PLAN_SURVIVE + 5] = survive.astype(np.int64)
    plan[PLAN_STEPS:PLAN_STEPS + 5] = steps
    plan[PLAN_DANGER] = 1 if hi[r0, c0] >= 1 else 0
    plan[PLAN_LETHAL] = 1 if (lo <= 1).any() else 0

    safe = passable & (hi < 0)
    dist, first = bfs(safe, r0, c0)
    plan[PLAN_POWERUP] = _toward(board >= 3, dist, first, survive, 1, 2)

    enemy = (agents >= 0) & ((agents == enemies[0]) | (agents == enemies[1]))
    any_enemy = bool(enemy.any())

    plan[PLAN_BOMB] = 0
    if ammo >= 1 and strength[r0, c0] == 0:
        trigger = bool((_shift_any(board == _WOOD))[r0, c0])
        if not trigger and any_enemy:
            reach = blast_mask(board, r0, c0, blast)
            if hunter:
                reach = reach | _shift_any(reach)
            trigger = bool((enemy & reach).any())
        if trigger:
            s2 = strength.copy()
            f2 = fuse.copy()
            s2[r0, c0] = blast
            f2[r0, c0] = bomb_life
            p2 = passable.copy()
            p2[r0, c0] = False
            lo2, hi2 = danger_windows(board, s2, f2, moving, agents, flames, flame_life)
            surv2, _ = escape_moves(p2, lo2, hi2, r0, c0)
            if surv2[0]:
                plan[PLAN_BOMB] = 1

    if any_enemy:
        plan[PLAN_ENEMY] = _toward(_shift_any(enemy), dist, first, survive, 1, _BIG)
    plan[PLAN_WOOD] = _toward(_shift_any(board == _WOOD), dist, first, survive, 1, _BIG)

    if len(corner_rows):
        rows, cols = np.indices((n, n))
        gap = np.min(
            [np.abs(rows - cr) + np.abs(cols - cc) for cr, cc in zip(corner_rows, corner_cols)], axis=0
        )
        if gap[r0, c0] > 0:
            score = np.where(dist >= 0, gap.astype(np.int64) * 1000 + dist, np.iinfo(np.int64).max)
            r, c = np.unravel_index(int(np.argmin(score)), score.shape)
            if (r, c) != (r0, c0):
                move = int(first[r, c])
                if move > 0 and survive[move]:
                    plan[PLAN_CORNER] = move

    for a in range(1, 5):
        rr, cc = r0 + _DR[a], c0 + _DC[a]
        ok = 0 <= rr < n and 0 <= cc < n and safe[rr, cc] and survive[a]
        plan[PLAN_WANDER + a - 1] = 1 if ok else 0
    return plan


def _project_bombs(board, strength, fuse, moving, agents):
    n = board.shape[0]
    s2 = strength.copy()
    f2 = fuse.copy()
    open_kind = _open_kind(board)
    moves = {}
    for r, c in zip(*np.nonzero((moving != 0) & (strength > 0))):
        d = int(moving[r, c])
        rr, cc = r + _DR[d], c + _DC[d]
        if not (0 <= rr < n and 0 <= cc < n):
            continue
        if not open_kind[rr, cc] or strength[rr, cc] > 0 or agents[rr, cc] >= 0:
            continue
        moves.setdefault((rr, cc), []).append((r, c))
    for (rr, cc), src in moves.items():
        if len(src) == 1:
            r, c = src[0]
            s2[rr, cc], f2[rr, cc] = strength[r, c], fuse[r, c]
            s2[r, c] = f2[r, c] = 0
    return s2, f2


def suicide_filter(board, strength, fuse, moving, agents, flames, r0, c0, me, can_kick, flame_life):
    n = board.shape[0]
    allowed = np.ones(6, dtype=bool)
    s1, f1 = _project_bombs(board, strength, fuse, moving, agents)
    still = np.zeros_like(moving)
    lo, _ = danger_windows(board, s1, f1, still, agents, flames, flame_life)
    lethal = lo <= 1
    if not lethal.any():
        return allowed
    stay_lethal = bool(lethal[r0, c0])
    open_kind = _open_kind(board)
    rival = (agents >= 0) & (agents != me)
    inside = lambda r, c: 0 <= r < n and 0 <= c < n  # noqa: E731
    for a in range(6):
        ok = not stay_lethal
        if 1 <= a <= 4:
            tr, tc = r0 + _DR[a], c0 + _DC[a]
            if inside(tr, tc) and open_kind[tr, tc]:
                if s1[tr, tc] > 0:
                    lr, lc = tr + _DR[a], tc + _DC[a]
                    if can_kick and inside(lr, lc) and open_kind[lr, lc] and s1[lr, lc] == 0 and not rival[lr, lc]:
                        s2, f2 = s1.copy(), f1.copy()
                        s2[lr, lc], f2[lr, lc] = s1[tr, tc], f1[tr, tc]
                        s2[tr, tc] = f2[tr, tc] = 0
                        lo2, _ = danger_windows(board, s2, f2, still, agents, flames, flame_life)
                        ok = bool(lo2[tr, tc] > 1)
                        if not ok:
                            rr, cc = np.nonzero(rival)
                            if np.any(np.abs(rr - lr) + np.abs(cc - lc) <= 2):
                                ok = not stay_lethal
                elif rival[tr, tc]:
                    if not lethal[tr, tc]:
                        for d in range(1, 5):
                            mr, mc = tr + _DR[d], tc + _DC[d]
                            if (mr, mc) == (r0, c0):
                                continue
                            if inside(mr, mc) and open_kind[mr, mc] and agents[mr, mc] < 0 and s1[mr, mc] == 0:
                                ok = True
                else:
                    bounce = any(
                        inside(tr + _DR[d], tc + _DC[d]) and rival[tr + _DR[d], tc + _DC[d]] for d in range(1, 5)
                    )
                    ok = bool(not lethal[tr, tc]) or (bounce and not stay_lethal)
        allowed[a] = ok
    if not allowed.any():
        allowed[:] = True
    return allowed
