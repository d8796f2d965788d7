"""Hand-enumerated single transitions on small constructed boards."""

import pytest

from pommerlab.engine import Action, Cause, Cell, MatchConfig, Outcome, step
from util import flame_cells, make_state, positions

S, U, L, D, R, B = (int(a) for a in Action)
IDLE = [S, S, S, S]


def act(**moves):
    a = list(IDLE)
    for k, v in moves.items():
        a[int(k[1:])] = v
    return a


def test_all_stop_is_identity_plus_step():
    s = make_state()
    s2, ev, res = step(s, IDLE)
    assert positions(s2) == positions(s)
    assert s2.step == 1 and res is None
    assert not ev.moves and not s2.bombs


def test_bomb_placement_uses_default_fuse_and_ammo():
    s = make_state({0: {"pos": (3, 3)}})
    s2, _, _ = step(s, act(a0=B))
    (bomb,) = s2.bombs
    assert (bomb.row, bomb.col, bomb.owner, bomb.fuse, bomb.blast_strength) == (3, 3, 0, 10, 2)
    assert s2.agents[0].ammo == 0


def test_bomb_without_ammo_does_nothing():
    s = make_state({0: {"pos": (3, 3), "ammo": 0}})
    s2, _, _ = step(s, act(a0=B))
    assert s2.bombs == [] and s2.agents[0].ammo == 0


def test_blast_clipped_by_rigid():
    s = make_state({0: {"pos": (0, 5), "ammo": 0}}, bombs=[(5, 5, 0, 1, 2)], walls={(4, 5): Cell.RIGID})
    s2, ev, _ = step(s, IDLE)
    assert flame_cells(s2) == {(5, 5), (6, 5), (5, 4), (5, 6)}
    assert s2.board[4, 5] == Cell.RIGID
    assert s2.agents[0].ammo == 1
    assert ev.detonations[0].wood == ()


def test_wood_stops_ray_and_reveals_powerup():
    s = make_state(
        {0: {"pos": (0, 5), "ammo": 0}},
        bombs=[(5, 5, 0, 1, 4)],
        walls={(5, 6): Cell.WOOD, (5, 3): Cell.WOOD},
        hidden={(5, 6): Cell.KICK},
    )
    s2, ev, _ = step(s, IDLE)
    cells = flame_cells(s2)
    assert (5, 6) in cells and (5, 7) not in cells
    assert (5, 3) in cells and (5, 2) not in cells
    assert s2.board[5, 6] == Cell.KICK and s2.board[5, 3] == Cell.PASSAGE
    assert set(ev.wood_blasted_by(0)) == {(5, 6), (5, 3)}
    assert cells == {(5, 5), (5, 6), (5, 4), (5, 3), (4, 5), (3, 5), (2, 5), (6, 5), (7, 5), (8, 5)}


def test_powerup_in_blast_is_destroyed():
    s = make_state({0: {"pos": (0, 5), "ammo": 0}}, bombs=[(5, 5, 0, 1, 2)], walls={(5, 6): Cell.EXTRA_BOMB})
    s2, _, _ = step(s, IDLE)
    assert s2.board[5, 6] == Cell.PASSAGE


def test_chain_detonation_same_step():
    s = make_state(
        {0: {"pos": (0, 5), "ammo": 0}, 1: {"pos": (10, 5), "ammo": 0}},
        bombs=[(5, 5, 0, 1, 3), (5, 7, 1, 9, 2)],
    )
    s2, ev, _ = step(s, IDLE)
    assert s2.bombs == []
    assert {d.bomb_id for d in ev.detonations} == {0, 1}
    cells = flame_cells(s2)
    assert {(5, 8), (4, 7), (6, 7)} <= cells
    assert s2.agents[0].ammo == 1 and s2.agents[1].ammo == 1


def test_chain_blocked_by_rigid():
    s = make_state(
        {0: {"pos": (0, 5), "ammo": 0}, 1: {"pos": (10, 5), "ammo": 0}},
        bombs=[(5, 5, 0, 1, 4), (5, 7, 1, 9, 2)],
        walls={(5, 6): Cell.RIGID},
    )
    s2, _, _ = step(s, IDLE)
    assert [(b.row, b.col, b.fuse) for b in s2.bombs] == [(5, 7, 8)]


def test_ray_passes_through_agents():
    s = make_state(
        {0: {"pos": (0, 0), "ammo": 0}, 1: {"pos": (5, 6)}, 3: {"pos": (5, 7)}},
        bombs=[(5, 5, 0, 1, 3)],
    )
    s2, ev, res = step(s, IDLE)
    assert not s2.agents[1].alive and not s2.agents[3].alive
    assert res.outcome is Outcome.WIN and res.winner == 0 and res.cause is Cause.ELIMINATION
    assert {d.agent_id for d in ev.deaths} == {1, 3}
    assert all(d.killed_by(0) for d in ev.deaths)
    assert set(s2.fallen) == {(1, 5, 6), (3, 5, 7)}


def test_simultaneous_death_is_tie():
    pos = {0: (5, 4), 1: (5, 6), 2: (4, 5), 3: (6, 5)}
    s = make_state({i: {"pos": p} for i, p in pos.items()}, bombs=[(5, 5, 0, 1, 2)])
    s2, _, res = step(s, IDLE)
    assert [a.alive for a in s2.agents] == [False] * 4
    assert res.outcome is Outcome.TIE and res.cause is Cause.SIMULTANEOUS_DEATH


def test_one_survivor_per_team_keeps_playing():
    s = make_state({0: {"pos": (5, 6)}, 1: {"pos": (5, 4)}}, bombs=[(5, 5, 2, 1, 2)])
    s2, _, res = step(s, IDLE)
    assert res is None
    assert s2.alive_ids() == (2, 3)


def test_timeout_is_tie():
    s = make_state(config=MatchConfig(max_steps=1))
    _, _, res = step(s, IDLE)
    assert res.outcome is Outcome.TIE and res.cause is Cause.TIMEOUT


def test_same_target_both_bounce():
    s = make_state({0: {"pos": (5, 4)}, 1: {"pos": (5, 6)}})
    s2, ev, _ = step(s, act(a0=R, a1=L))
    assert s2.agents[0].position == (5, 4) and s2.agents[1].position == (5, 6)
    assert ev.moves == []


def test_swap_both_bounce():
    s = make_state({0: {"pos": (5, 4)}, 1: {"pos": (5, 5)}})
    s2, _, _ = step(s, act(a0=R, a1=L))
    assert s2.agents[0].position == (5, 4) and s2.agents[1].position == (5, 5)


def test_follow_the_leader_moves_both():
    s = make_state({0: {"pos": (5, 4)}, 1: {"pos": (5, 5)}})
    s2, _, _ = step(s, act(a0=R, a1=R))
    assert s2.agents[0].position == (5, 5) and s2.agents[1].position == (5, 6)


def test_blocked_by_standing_agent():
    s = make_state({0: {"pos": (5, 4)}, 1: {"pos": (5, 5)}})
    s2, _, _ = step(s, act(a0=R))
    assert s2.agents[0].position == (5, 4)


def test_blocked_chain_reverts_everyone():
    # 0 follows 1, but 1 collides with 2 head-on over the same target.
    s = make_state({0: {"pos": (5, 3)}, 1: {"pos": (5, 4)}, 2: {"pos": (5, 6)}})
    s2, _, _ = step(s, act(a0=R, a1=R, a2=L))
    assert positions(s2)[:3] == [(5, 3), (5, 4), (5, 6)]


def test_walls_and_edges_block_movement():
    s = make_state({0: {"pos": (0, 0)}, 1: {"pos": (5, 5)}}, walls={(4, 5): Cell.RIGID, (5, 6): Cell.WOOD})
    s2, _, _ = step(s, act(a0=U, a1=U))
    assert s2.agents[0].position == (0, 0) and s2.agents[1].position == (5, 5)
    s3, _, _ = step(s, act(a0=L, a1=R))
    assert s3.agents[0].position == (0, 0) and s3.agents[1].position == (5, 5)


def test_bomb_blocks_without_kick():
    s = make_state({0: {"pos": (5, 4), "ammo": 0}}, bombs=[(5, 5, 0, 9, 2)])
    s2, _, _ = step(s, act(a0=R))
    assert s2.agents[0].position == (5, 4)
    assert (s2.bombs[0].row, s2.bombs[0].col) == (5, 5)


def test_kick_sends_bomb_rolling():
    s = make_state({0: {"pos": (5, 4), "ammo": 0, "kick": True}}, bombs=[(5, 5, 0, 9, 2)])
    s2, ev, _ = step(s, act(a0=R))
    b = s2.bombs[0]
    assert s2.agents[0].position == (5, 5)
    assert (b.row, b.col, b.moving_dir, b.kicked) == (5, 6, R, True)
    assert ev.kicks == [(0, 0)]
    s3, _, _ = step(s2, IDLE)
    assert (s3.bombs[0].row, s3.bombs[0].col) == (5, 7)


def test_kicked_bomb_stops_at_wall():
    s = make_state({0: {"pos": (5, 4), "ammo": 0, "kick": True}}, bombs=[(5, 5, 0, 9, 2)],
                   walls={(5, 7): Cell.WOOD})
    s2, _, _ = step(s, act(a0=R))
    s3, _, _ = step(s2, IDLE)
    b = s3.bombs[0]
    assert (b.row, b.col, b.moving_dir) == (5, 6, 0)


def test_kick_blocked_by_agent_behind_bomb():
    s = make_state({0: {"pos": (5, 4), "ammo": 0, "kick": True}, 1: {"pos": (5, 6)}}, bombs=[(5, 5, 0, 9, 2)])
    s2, ev, _ = step(s, act(a0=R))
    assert s2.agents[0].position == (5, 4)
    assert (s2.bombs[0].row, s2.bombs[0].col) == (5, 5) and ev.kicks == []


def test_kicked_bomb_kill_is_flagged_kicked():
    s = make_state({0: {"pos": (5, 4), "ammo": 0, "kick": True}, 1: {"pos": (7, 7)}}, bombs=[(5, 5, 3, 2, 3)])
    s2, _, _ = step(s, act(a0=R))  # bomb to (5, 6); it rolls on to (5, 7) and goes off
    s3, ev, _ = step(s2, IDLE)
    (death,) = [d for d in ev.deaths if d.agent_id == 1]
    assert death.killers == ((0, 3, True),)
    assert not death.killed_by(3) and death.killed_by(3, include_kicked=True)


@pytest.mark.parametrize(
    "kind,field,before,after",
    [(Cell.EXTRA_BOMB, "ammo", 1, 2), (Cell.INCR_RANGE, "blast_strength", 2, 3), (Cell.KICK, "can_kick", False, True)],
)
def test_powerup_pickup(kind, field, before, after):
    s = make_state({0: {"pos": (5, 4)}}, walls={(5, 5): kind})
    assert getattr(s.agents[0], field) == before
    s2, ev, _ = step(s, act(a0=R))
    assert getattr(s2.agents[0], field) == after
    assert s2.board[5, 5] == Cell.PASSAGE and ev.powerup_picked(0) == [int(kind)]


def test_flame_lifetime_and_walking_into_flame():
    s = make_state({0: {"pos": (5, 2), "ammo": 0}}, bombs=[(5, 5, 0, 1, 2)])
    s2, _, _ = step(s, IDLE)
    assert s2.flames[5, 4] == 2
    s3, _, _ = step(s2, act(a0=R))  # (5,3) is not aflame
    assert s3.agents[0].alive and s3.flames[5, 4] == 1
    s4, ev, _ = step(s3, act(a0=R))  # flame at (5,4) expires in phase 1
    assert s4.agents[0].alive and s4.flames.sum() == 0

    t = make_state({0: {"pos": (5, 3)}}, flames={(5, 4): 2})
    t2, ev, _ = step(t, act(a0=R))
    assert not t2.agents[0].alive and ev.deaths[0].killers == ()


def test_dead_owner_bomb_still_detonates():
    s = make_state({0: {"pos": (5, 5), "ammo": 0}, 2: {"pos": (9, 9)}}, bombs=[(5, 5, 0, 1, 2), (1, 1, 0, 2, 2)])
    s2, _, res = step(s, IDLE)
    assert not s2.agents[0].alive and res is None
    assert s2.board[5, 5] == Cell.PASSAGE
    s3, ev, _ = step(s2, IDLE)
    assert [d.bomb_id for d in ev.detonations] == [1]


def test_moving_bomb_hits_standing_agent_stops():
    s = make_state({1: {"pos": (5, 7)}}, bombs=[(5, 5, 0, 9, 2, R)])
    s2, _, _ = step(s, IDLE)
    assert (s2.bombs[0].row, s2.bombs[0].col, s2.bombs[0].moving_dir) == (5, 6, R)
    s3, _, _ = step(s2, IDLE)
    assert (s3.bombs[0].row, s3.bombs[0].col, s3.bombs[0].moving_dir) == (5, 6, 0)


def test_rejects_malformed_actions():
    s = make_state()
    with pytest.raises(ValueError):
        step(s, [0, 0, 0])
    with pytest.raises(ValueError):
        step(s, [0, 0, 0, 6])


def test_dead_agent_actions_ignored():
    s = make_state({1: {"pos": (5, 5), "alive": False}})
    s2, _, _ = step(s, act(a1=B))
    assert s2.bombs == []
