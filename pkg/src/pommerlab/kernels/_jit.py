"""Loop kernels compiled with numba.

Every function here has a twin in ``_np.py`` with identical results; the
twins are cross-checked in the test suite. Grids are square int arrays using
the cell codes from ``pommerlab.engine.constants`` (``-1`` marks fog).
"""

import numpy as np
from numba import njit

_RIGID = 1
_WOOD = 2
_FOG = -1
_NEVER = 10000

# UP, LEFT, DOWN, RIGHT in action order 1..4; index 0 is STOP.
_DR = np.array([0, -1, 0, 1, 0], dtype=np.int64)
_DC = np.array([0, 0, -1, 0, 1], dtype=np.int64)


@njit(cache=True)
def _ray_into(board, r, c, strength, out):
    n = board.shape[0]
    out[r, c] = True
    for d in range(1, 5):
        rr = r
        cc = c
        for _ in range(1, strength):
            rr += _DR[d]
            cc += _DC[d]
            if rr < 0 or rr >= n or cc < 0 or cc >= n:
                break
            kind = board[rr, cc]
            if kind == _RIGID or kind == _FOG:
                break
            out[rr, cc] = True
            if kind == _WOOD:
                break


@njit(cache=True)
def blast_mask(board, r, c, strength):
    n = board.shape[0]
    out = np.zeros((n, n), dtype=np.bool_)
    _ray_into(board, r, c, strength, out)
    return out


@njit(cache=True)
def detonate(board, rows, cols, strengths, triggered):
    n = board.shape[0]
    nb = rows.shape[0]
    exploded = np.zeros(nb, dtype=np.bool_)
    rays = np.zeros((nb, n, n), dtype=np.bool_)
    queue = np.empty(nb, dtype=np.int64)
    head = 0
    tail = 0
    for b in range(nb):
        if triggered[b]:
            exploded[b] = True
            queue[tail] = b
            tail += 1
    while head < tail:
        b = queue[head]
        head += 1
        _ray_into(board, rows[b], cols[b], strengths[b], rays[b])
        for o in range(nb):
            if not exploded[o] and rays[b, rows[o], cols[o]]:
                exploded[o] = True
                queue[tail] = o
                tail += 1
    return exploded, rays


@njit(cache=True)
def _is_open_kind(kind):
    return kind == 0 or kind >= 3


@njit(cache=True)
def danger_windows(board, strength, fuse, moving, agents, flames, flame_life):
    n = board.shape[0]
    nb = 0
    for r in range(n):
        for c in range(n):
            if strength[r, c] > 0:
                nb += 1
    br = np.empty(nb, dtype=np.int64)
    bc = np.empty(nb, dtype=np.int64)
    bs = np.empty(nb, dtype=np.int64)
    be = np.empty(nb, dtype=np.int64)
    bd = np.empty(nb, dtype=np.int64)
    k = 0
    for r in range(n):
        for c in range(n):
            if strength[r, c] > 0:
                br[k] = r
                bc[k] = c
                bs[k] = strength[r, c]
                be[k] = fuse[r, c]
                bd[k] = moving[r, c]
                k += 1

    # Moving bombs advance one cell unless blocked or contested.
    tr = br.copy()
    tc = bc.copy()
    for b in range(nb):
        d = bd[b]
        if d == 0:
            continue
        rr = br[b] + _DR[d]
        cc = bc[b] + _DC[d]
        if rr < 0 or rr >= n or cc < 0 or cc >= n:
            continue
        if not _is_open_kind(board[rr, cc]) or strength[rr, cc] > 0 or agents[rr, cc] >= 0:
            continue
        tr[b] = rr
        tc[b] = cc
    pr = br.copy()
    pc = bc.copy()
    for b in range(nb):
        if bd[b] == 0 or (tr[b] == br[b] and tc[b] == bc[b]):
            continue
        contested = False
        for o in range(nb):
            if o != b and bd[o] != 0 and tr[o] == tr[b] and tc[o] == tc[b]:
                if not (tr[o] == br[o] and tc[o] == bc[o]):
                    contested = True
        if not contested:
            pr[b] = tr[b]
            pc[b] = tc[b]
    for b in range(nb):
        if flames[pr[b], pc[b]] >= 2 and be[b] > 1:
            be[b] = 1

    rays = np.zeros((nb, n, n), dtype=np.bool_)
    for b in range(nb):
        _ray_into(board, pr[b], pc[b], bs[b], rays[b])

    changed = True
    while changed:
        changed = False
        for b in range(nb):
            for o in range(nb):
                if o != b and be[b] < be[o] and rays[b, pr[o], pc[o]]:
                    be[o] = be[b]
                    changed = True

    lo = np.full((n, n), _NEVER, dtype=np.int16)
    hi = np.full((n, n), -1, dtype=np.int16)
    for b in range(nb):
        for r in range(n):
            for c in range(n):
                if rays[b, r, c]:
                    if be[b] < lo[r, c]:
                        lo[r, c] = be[b]
                    end = be[b] + flame_life - 1
                    if end > hi[r, c]:
                        hi[r, c] = end
    for r in range(n):
        for c in range(n):
            ttl = flames[r, c]
            if ttl >= 2:
                if lo[r, c] > 1:
                    lo[r, c] = 1
                if ttl - 1 > hi[r, c]:
                    hi[r, c] = ttl - 1
    return lo, hi


@njit(cache=True)
def escape_moves(passable, lo, hi, r0, c0):
    n = passable.shape[0]
    survive = np.zeros(5, dtype=np.bool_)
    steps = np.full(5, -1, dtype=np.int16)
    horizon = 1
    for r in range(n):
        for c in range(n):
            if hi[r, c] + 1 > horizon:
                horizon = hi[r, c] + 1
    cur = np.zeros((n, n), dtype=np.bool_)
    nxt = np.zeros((n, n), dtype=np.bool_)
    for a in range(5):
        r1 = r0 + _DR[a]
        c1 = c0 + _DC[a]
        if a > 0:
            if r1 < 0 or r1 >= n or c1 < 0 or c1 >= n or not passable[r1, c1]:
                continue
        if lo[r1, c1] <= 1 and 1 <= hi[r1, c1]:
            continue
        cur[:, :] = False
        cur[r1, c1] = True
        t = 1
        while True:
            found = False
            alive = False
            for r in range(n):
                for c in range(n):
                    if cur[r, c]:
                        alive = True
                        if hi[r, c] < t:
                            found = True
            if not alive:
                break
            if found:
                survive[a] = True
                steps[a] = t
                break
            t += 1
            nxt[:, :] = False
            for r in range(n):
                for c in range(n):
                    if not cur[r, c]:
                        continue
                    for d in range(5):
                        rr = r + _DR[d]
                        cc = c + _DC[d]
                        if rr < 0 or rr >= n or cc < 0 or cc >= n:
                            continue
                        if d > 0 and not passable[rr, cc]:
                            continue
                        if lo[rr, cc] <= t and t <= hi[rr, cc]:
                            continue
                        nxt[rr, cc] = True
            tmp = cur
            cur = nxt
            nxt = tmp
            if t > horizon + 1:
                break
    return survive, steps


@njit(cache=True)
def bfs(passable, r0, c0):
    """Distances from (r0, c0) plus the canonical first move.

    The first move of a cell is the lowest action code among first moves of
    all its shortest paths, so the result does not depend on visit order.
    """
    n = passable.shape[0]
    dist = np.full((n, n), -1, dtype=np.int16)
    mask = np.zeros((n, n), dtype=np.int8)
    qr = np.empty(n * n, dtype=np.int64)
    qc = np.empty(n * n, dtype=np.int64)
    dist[r0, c0] = 0
    qr[0] = r0
    qc[0] = c0
    head = 0
    tail = 1
    while head < tail:
        r = qr[head]
        c = qc[head]
        head += 1
        for d in range(1, 5):
            rr = r + _DR[d]
            cc = c + _DC[d]
            if rr < 0 or rr >= n or cc < 0 or cc >= n or not passable[rr, cc]:
                continue
            bit = (1 << (d - 1)) if dist[r, c] == 0 else mask[r, c]
            if dist[rr, cc] == -1:
                dist[rr, cc] = dist[r, c] + 1
                mask[rr, cc] = bit
                qr[tail] = rr
                qc[tail] = cc
                tail += 1
            elif dist[rr, cc] == dist[r, c] + 1:
                mask[rr, cc] |= bit
    first = np.full((n, n), -1, dtype=np.int8)
    for r in range(n):
        for c in range(n):
            m = mask[r, c]
            if dist[r, c] == 0:
                first[r, c] = 0
            elif m != 0:
                for d in range(1, 5):
                    if m & (1 << (d - 1)):
                        first[r, c] = d
                        break
    return dist, first


@njit(cache=True)
def jitter_flags(rows, cols, threshold):
    n = rows.shape[0]
    flags = np.zeros(n, dtype=np.bool_)
    # Dormant runs: identical consecutive positions.
    s = 0
    while s < n:
        e = s
        while e + 1 < n and rows[e + 1] == rows[s] and cols[e + 1] == cols[s]:
            e += 1
        if e - s + 1 > threshold:
            for i in range(s, e + 1):
                flags[i] = True
        s = e + 1
    # Alternating runs between two adjacent cells.
    s = 0
    while s + 1 < n:
        if abs(rows[s + 1] - rows[s]) + abs(cols[s + 1] - cols[s]) != 1:
            s += 1
            continue
        e = s + 1
        while e + 1 < n and rows[e + 1] == rows[e - 1] and cols[e + 1] == cols[e - 1]:
            e += 1
        if e - s + 1 > threshold:
            for i in range(s, e + 1):
                flags[i] = True
        s = e if e > s + 1 else s + 1
    return flags


@njit(cache=True)
def gae(rewards, values, gamma, lam):
    n = rewards.shape[0]
    adv = np.zeros(n, dtype=np.float64)
    running = 0.0
    for t in range(n - 1, -1, -1):
        delta = rewards[t] + gamma * values[t + 1] - values[t]
        running = delta + gamma * lam * running
        adv[t] = running
    return adv


# Layout of the vector returned by ``simple_plan``.
PLAN_SURVIVE = 0  # 5 slots, Stop..Right
PLAN_STEPS = 5  # 5 slots
PLAN_DANGER = 10
PLAN_POWERUP = 11
PLAN_BOMB = 12
PLAN_ENEMY = 13
PLAN_WOOD = 14
PLAN_CORNER = 15
PLAN_WANDER = 16  # 4 slots, Up..Right
PLAN_LETHAL = 20  # any cell lethal one step ahead
PLAN_LEN = 21


@njit(cache=True)
def _toward(targets, dist, first, survive, dmin, dmax):
    n = dist.shape[0]
    best = -1
    br = 0
    bc = 0
    for r in range(n):
        for c in range(n):
            d = dist[r, c]
            if targets[r, c] and d >= dmin and d <= dmax and (best < 0 or d < best):
                best = d
                br = r
                bc = c
    if best < 0:
        return -1
    move = first[br, bc]
    if move <= 0 or not survive[move]:
        return -1
    return move


@njit(cache=True)
def _cross_neighbours(mask):
    n = mask.shape[0]
    out = np.zeros((n, n), dtype=np.bool_)
    for r in range(n):
        for c in range(n):
            if mask[r, c]:
                for d in range(1, 5):
                    rr = r + _DR[d]
                    cc = c + _DC[d]
                    if 0 <= rr < n and 0 <= cc < n:
                        out[rr, cc] = True
    return out


@njit(cache=True)
def simple_plan(board, strength, fuse, moving, agents, flames, r0, c0, ammo, blast,
                enemies, corner_rows, corner_cols, hunter, bomb_life, flame_life):
    """Everything the scripted heuristic needs, as one small int vector."""
    n = board.shape[0]
    plan = np.full(PLAN_LEN, -1, dtype=np.int64)
    passable = np.zeros((n, n), dtype=np.bool_)
    for r in range(n):
        for c in range(n):
            passable[r, c] = _is_open_kind(board[r, c]) and strength[r, c] == 0 and agents[r, c] < 0
    passable[r0, c0] = strength[r0, c0] == 0
    lo, hi = danger_windows(board, strength, fuse, moving, agents, flames, flame_life)
    survive, steps = escape_moves(passable, lo, hi, r0, c0)
    for a in range(5):
        plan[PLAN_SURVIVE + a] = 1 if survive[a] else 0
        plan[PLAN_STEPS + a] = steps[a]
    plan[PLAN_DANGER] = 1 if hi[r0, c0] >= 1 else 0
    plan[PLAN_LETHAL] = 0
    for r in range(n):
        for c in range(n):
            if lo[r, c] <= 1:
                plan[PLAN_LETHAL] = 1

    safe = np.zeros((n, n), dtype=np.bool_)
    for r in range(n):
        for c in range(n):
            safe[r, c] = passable[r, c] and hi[r, c] < 0
    dist, first = bfs(safe, r0, c0)

    plan[PLAN_POWERUP] = _toward(board >= 3, dist, first, survive, 1, 2)

    enemy = np.zeros((n, n), dtype=np.bool_)
    any_enemy = False
    for r in range(n):
        for c in range(n):
            a = agents[r, c]
            if a >= 0 and (a == enemies[0] or a == enemies[1]):
                enemy[r, c] = True
                any_enemy = True

    plan[PLAN_BOMB] = 0
    if ammo >= 1 and strength[r0, c0] == 0:
        trigger = False
        for d in range(1, 5):
            rr = r0 + _DR[d]
            cc = c0 + _DC[d]
            if 0 <= rr < n and 0 <= cc < n and board[rr, cc] == _WOOD:
                trigger = True
        if not trigger and any_enemy:
            cross = blast_mask(board, r0, c0, blast)
            reach = cross
            if hunter:
                reach = cross | _cross_neighbours(cross)
            for r in range(n):
                for c in range(n):
                    if enemy[r, c] and reach[r, c]:
                        trigger = True
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
        plan[PLAN_ENEMY] = _toward(_cross_neighbours(enemy), dist, first, survive, 1, 1 << 30)
    plan[PLAN_WOOD] = _toward(_cross_neighbours(board == _WOOD), dist, first, survive, 1, 1 << 30)

    k = corner_rows.shape[0]
    if k > 0:
        own_gap = 1 << 30
        for i in range(k):
            g = abs(r0 - corner_rows[i]) + abs(c0 - corner_cols[i])
            if g < own_gap:
                own_gap = g
        if own_gap > 0:
            best = -1
            br = 0
            bc = 0
            for r in range(n):
                for c in range(n):
                    if dist[r, c] < 0:
                        continue
                    g = 1 << 30
                    for i in range(k):
                        gi = abs(r - corner_rows[i]) + abs(c - corner_cols[i])
                        if gi < g:
                            g = gi
                    score = g * 1000 + dist[r, c]
                    if best < 0 or score < best:
                        best = score
                        br = r
                        bc = c
            if not (br == r0 and bc == c0):
                move = first[br, bc]
                if move > 0 and survive[move]:
                    plan[PLAN_CORNER] = move

    for a in range(1, 5):
        rr = r0 + _DR[a]
        cc = c0 + _DC[a]
        ok = 0 <= rr < n and 0 <= cc < n and safe[rr, cc] and survive[a]
        plan[PLAN_WANDER + a - 1] = 1 if ok else 0
    return plan


@njit(cache=True)
def _project_bombs(board, strength, fuse, moving, agents):
    n = board.shape[0]
    s2 = strength.copy()
    f2 = fuse.copy()
    tr = np.full((n, n), -1, dtype=np.int64)
    tc = np.full((n, n), -1, dtype=np.int64)
    claims = np.zeros((n, n), dtype=np.int64)
    for r in range(n):
        for c in range(n):
            d = moving[r, c]
            if d == 0 or strength[r, c] == 0:
                continue
            rr = r + _DR[d]
            cc = c + _DC[d]
            if rr < 0 or rr >= n or cc < 0 or cc >= n:
                continue
            if not _is_open_kind(board[rr, cc]) or strength[rr, cc] > 0 or agents[rr, cc] >= 0:
                continue
            tr[r, c] = rr
            tc[r, c] = cc
            claims[rr, cc] += 1
    # Targets are always empty cells, so moves can be applied in any order.
    for r in range(n):
        for c in range(n):
            if tr[r, c] >= 0 and claims[tr[r, c], tc[r, c]] == 1:
                s2[tr[r, c], tc[r, c]] = strength[r, c]
                f2[tr[r, c], tc[r, c]] = fuse[r, c]
                s2[r, c] = 0
                f2[r, c] = 0
    return s2, f2


@njit(cache=True)
def suicide_filter(board, strength, fuse, moving, agents, flames, r0, c0, me, can_kick, flame_life):
    """Allowed-action mask (length 6) under the one-step certain-death rule."""
    n = board.shape[0]
    allowed = np.ones(6, dtype=np.bool_)
    s1, f1 = _project_bombs(board, strength, fuse, moving, agents)
    still = np.zeros((n, n), dtype=moving.dtype)
    lo, _ = danger_windows(board, s1, f1, still, agents, flames, flame_life)
    any_lethal = False
    for r in range(n):
        for c in range(n):
            if lo[r, c] <= 1:
                any_lethal = True
    if not any_lethal:
        return allowed
    stay_lethal = lo[r0, c0] <= 1
    count = 0
    for a in range(6):
        ok = not stay_lethal
        if 1 <= a <= 4:
            tr = r0 + _DR[a]
            tc = c0 + _DC[a]
            if 0 <= tr < n and 0 <= tc < n and _is_open_kind(board[tr, tc]):
                if s1[tr, tc] > 0:
                    lr = tr + _DR[a]
                    lc = tc + _DC[a]
                    can_land = (
                        can_kick
                        and 0 <= lr < n and 0 <= lc < n
                        and _is_open_kind(board[lr, lc])
                        and s1[lr, lc] == 0
                        and not (agents[lr, lc] >= 0 and agents[lr, lc] != me)
                    )
                    if can_land:
                        s2 = s1.copy()
                        f2 = f1.copy()
                        s2[lr, lc] = s1[tr, tc]
                        f2[lr, lc] = f1[tr, tc]
                        s2[tr, tc] = 0
                        f2[tr, tc] = 0
                        lo2, _ = danger_windows(board, s2, f2, still, agents, flames, flame_life)
                        ok = lo2[tr, tc] > 1
                        if not ok:
                            # A rival heading for the landing cell would make the kick fail.
                            for r in range(n):
                                for c in range(n):
                                    if agents[r, c] >= 0 and agents[r, c] != me and abs(r - lr) + abs(c - lc) <= 2:
                                        ok = not stay_lethal
                elif agents[tr, tc] >= 0 and agents[tr, tc] != me:
                    if not (lo[tr, tc] <= 1):
                        for d in range(1, 5):
                            mr = tr + _DR[d]
                            mc = tc + _DC[d]
                            if mr == r0 and mc == c0:
                                continue
                            if 0 <= mr < n and 0 <= mc < n and _is_open_kind(board[mr, mc]) \
                                    and agents[mr, mc] < 0 and s1[mr, mc] == 0:
                                ok = True
                else:
                    entered_ok = lo[tr, tc] > 1
                    bounce = False
                    for d in range(1, 5):
                        mr = tr + _DR[d]
                        mc = tc + _DC[d]
                        if 0 <= mr < n and 0 <= mc < n and agents[mr, mc] >= 0 and agents[mr, mc] != me:
                            bounce = True
                    ok = entered_ok or (bounce and not stay_lethal)
        allowed[a] = ok
        if ok:
            count += 1
    if count == 0:
        allowed[:] = True
    return allowed
