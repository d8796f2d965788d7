"""Runner, tournaments, curriculum rollouts, metrics, jitter, ablations and export."""

import random
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pommerlab.agents import PolicyHandle, act_static
from pommerlab.curriculum import CurriculumError, CurriculumSchedule, PhaseSpec, preset, tally
from pommerlab.engine import MatchConfig, replay, verify
from pommerlab.harness import (
    TrainingLog,
    ablation_config,
    ablation_grid,
    detect_jitter,
    detect_jitter_many,
    discounted_returns,
    episode_seed,
    export_trajectories,
    gae,
    jitter_flags,
    load_trajectories,
    moving_average,
    pairs,
    plan_blocks,
    positions_from_records,
    recompute_rewards,
    run_curriculum,
    run_episode,
    run_tournament,
    shaping_config,
    trajectories_of,
)
from pommerlab.harness.tournament import tournament_jobs
from util import gae_oracle, jitter_oracle, mc_advantage, synthetic_series

SHORT = MatchConfig(max_steps=60)


# -- runner ---------------------------------------------------------------------


def test_static_teams_tie_at_timeout():
    rec = run_episode(PolicyHandle("ST"), PolicyHandle("ST"), seed=3)
    assert rec.result.for_team(0) == "tie" and rec.result.cause.value == "timeout"
    assert rec.length == 800


def test_record_replays_and_carries_rewards():
    rec = run_episode(PolicyHandle("SS"), PolicyHandle("SS_NB"), seed=episode_seed(2, 5), episode_id=5)
    assert verify(rec)
    final, _ = replay(rec)
    assert final.hash() == rec.final_hash
    trs = trajectories_of(rec)
    assert [t.agent_id for t in trs] == [0, 2]
    for t in trs:
        assert len(t.total) == len(t.T) == rec.length
        assert t.total[-1] == pytest.approx(0.5 * t.E + 0.5 * t.K + t.T[-1])
    for aid in range(4):
        assert len(rec.extras["positions"][str(aid)]) == rec.length + 1


def test_episode_seeds_are_disjoint():
    seeds = {episode_seed(b, e) for b in range(3) for e in range(1000)}
    assert len(seeds) == 3000
    with pytest.raises(ValueError):
        episode_seed(0, 2**32)


# -- tournament -----------------------------------------------------------------


def test_static_tournament_is_all_ties():
    rep = run_tournament("ST", ["ST"], games_per_opponent=4, config=MatchConfig(max_steps=80))
    row = rep.row("ST")
    assert (row.W, row.L, row.T) == (0.0, 0.0, 1.0)


def test_tournament_rows_partition_outcomes():
    rep = run_tournament("SS", games_per_opponent=5, config=SHORT)
    assert rep.total_games == 20
    for row in rep.rows:
        assert row.games == 5
        assert row.W + row.L + row.T == pytest.approx(1.0)
    assert [r.opponent for r in rep.rows] == ["ST", "SS", "SS_NB", "EXT"]
    csv_text = rep.to_csv().splitlines()
    assert csv_text[0] == "opponent,games,wins,losses,ties,aborted,W,L,T"
    assert csv_text[-1].startswith("average,20,")


def test_tournament_seeds_are_disjoint():
    jobs = tournament_jobs(PolicyHandle("SS"), ["ST", "SS", "SS_NB", "EXT"], 50, 7, MatchConfig())
    assert len({j.seed for j in jobs}) == 200
    assert sorted(j.episode_id for j in jobs) == list(range(200))


def test_tournament_bytes_do_not_depend_on_workers():
    a = run_tournament("SS", ["ST", "SS"], games_per_opponent=4, config=SHORT, workers=1, base_seed=3)
    b = run_tournament("SS", ["ST", "SS"], games_per_opponent=4, config=SHORT, workers=2, base_seed=3)
    assert a.to_csv() == b.to_csv() and a.to_json() == b.to_json()


def test_tournament_writes_reports(tmp_path):
    rep = run_tournament("SS", ["ST"], games_per_opponent=2, config=SHORT, records_out=tmp_path / "rec")
    js, cs = rep.write(tmp_path)
    assert js.name == "eval_report.json" and cs.name == "eval_report.csv"
    assert len(list((tmp_path / "rec").glob("*.jsonl"))) == 2


# -- curriculum rollouts ------------------------------------------------------------


def test_block_of_64_gives_128_trajectories(tmp_path):
    sched = preset("agent20")
    blocks = list(run_curriculum(sched, "SS", parallelism=64, max_games=64, config=SHORT))
    assert len(blocks) == 1
    b = blocks[0]
    assert len(b) == 64 and len(b.trajectories) == 128
    assert b.value_only
    with TrainingLog(tmp_path / "training_log.csv") as log:
        log.add(b)
    lines = (tmp_path / "training_log.csv").read_text().splitlines()
    assert lines[0] == "episode_id,phase,opponent,result,game_length,E,K,sum_T,total"
    assert len(lines) == 65


def test_blocks_after_warmup_train_the_policy():
    sched = preset("agent20")
    blocks = list(run_curriculum(sched, "SS", parallelism=4, max_games=8, start=4998, config=SHORT))
    metas = [m for b in blocks for _, m in b.episodes]
    assert [m.game_index for m in metas] == list(range(4998, 5006))
    assert [m.value_only for m in metas] == [True, True] + [False] * 6
    assert blocks[0].value_only is False
    assert all(m.opponent.value == "ST" for m in metas[2:])


def test_full_budget_plan_without_playing():
    for name in ("agent0", "incrm"):
        sched = preset(name)
        counts = {}
        n = 0
        for metas in plan_blocks(sched, 64):
            assert len(metas) <= 64
            for m in metas:
                counts[m.opponent] = counts.get(m.opponent, 0) + 1
                n += 1
        assert n == 100_000
        assert counts == tally(sched)


def test_invalid_schedule_is_rejected():
    bad = CurriculumSchedule("bad", [PhaseSpec({"ST": 10})])
    with pytest.raises(CurriculumError):
        next(run_curriculum(bad))


# -- GAE ------------------------------------------------------------------------


def test_gae_trivial_cases():
    assert gae([1.0], [0.0, 0.0], 0.99) == pytest.approx([1.0])
    assert (gae(np.zeros(7), np.zeros(8)) == 0).all()
    with pytest.raises(ValueError):
        gae([1.0, 2.0], [0.0, 0.0])


def test_gae_matches_brute_force():
    rng = np.random.default_rng(0)
    for _ in range(200):
        n = int(rng.integers(1, 60))
        r = rng.normal(size=n)
        v = rng.normal(size=n + 1)
        np.testing.assert_allclose(gae(r, v, 0.99, 1.0), mc_advantage(r, v, 0.99), rtol=0, atol=1e-9)
        np.testing.assert_allclose(gae(r, v, 0.99, 0.95), gae_oracle(r, v, 0.99, 0.95), rtol=0, atol=1e-9)


def test_discounted_returns():
    assert discounted_returns([1, 1, 1], 0.5).tolist() == [1.75, 1.5, 1.0]
    assert discounted_returns([0, 0], 0.5, bootstrap=4.0).tolist() == [1.0, 2.0]


# -- moving average -----------------------------------------------------------------


def test_moving_average_cases():
    const = moving_average([3.0] * 50, 10)
    assert (const.mean == 3.0).all() and (const.upper == const.lower).all()
    x = np.arange(100, dtype=float)
    assert moving_average(x, 1).mean.tolist() == x.tolist()
    ramp = moving_average(x, 10)
    assert ramp.mean[9] == 4.5 and ramp.mean[99] == 94.5
    assert ramp.mean[0] == 0.0
    sd = np.std(x[90:], ddof=1)
    assert ramp.upper[99] == pytest.approx(94.5 + 1.96 * sd)
    one = moving_average([1.0, 2.0, 3.0], 5)
    assert len(one) == 1 and one.mean[0] == 2.0
    with pytest.raises(ValueError):
        moving_average(x, 0)


def test_moving_average_matches_direct_windows():
    rng = np.random.default_rng(1)
    x = rng.normal(size=300)
    sm = moving_average(x, 25)
    for i in range(300):
        w = x[max(0, i - 24):i + 1]
        assert sm.mean[i] == pytest.approx(w.mean(), abs=1e-12)
        s = w.std(ddof=1) if len(w) > 1 else 0.0
        assert sm.upper[i] - sm.mean[i] == pytest.approx(1.96 * s, abs=1e-9)


# -- jitter ---------------------------------------------------------------------


def test_jitter_sixty_step_alternation():
    pos = [(3, 4) if k % 2 == 0 else (3, 5) for k in range(60)]
    assert jitter_flags(pos).all()
    rep = detect_jitter(pos)
    assert rep.bins == [1.0, 0.2]
    assert rep.to_csv() == "bin_start,fraction\n0,1.000000\n50,0.200000\n"


def test_jitter_thirty_nine_step_dormancy():
    pos = [(5, 5)] * 39 + [(5, 6), (5, 7), (6, 7), (7, 7)]
    assert not jitter_flags(pos).any()
    pos41 = [(5, 5)] * 41 + [(5, 6)]
    assert jitter_flags(pos41).tolist() == [True] * 41 + [False]


def test_jitter_random_walk_without_revisits():
    pos = [(0, c) for c in range(11)] + [(r, 10) for r in range(1, 11)]
    assert not jitter_flags(pos).any()


def test_jitter_matches_definition_oracle():
    rng = random.Random(5)
    for _ in range(150):
        x = synthetic_series(rng)
        th = rng.choice([0, 1, 2, 3, 40])
        assert jitter_flags(x, th).tolist() == jitter_oracle(x, th)


def test_jitter_many_averages_reached_bins():
    a = [(1, 1)] * 100
    b = [(k % 11, k // 11) for k in range(50)]
    rep = detect_jitter_many([a, b])
    assert rep.bins == [0.5, 1.0] and rep.games == 2
    with pytest.raises(ValueError):
        detect_jitter([])


def test_positions_from_records_skip_start_cell():
    rec = run_episode(PolicyHandle("ST"), PolicyHandle("ST"), seed=1, config=SHORT)
    series = positions_from_records([rec])
    assert len(series) == 2 and len(series[0]) == 60
    assert detect_jitter_many(series).bins == [1.0, pytest.approx(10 / 50)]


# -- ablations ------------------------------------------------------------------


def test_ablation_configs():
    cfg = ablation_config(ammo=8)
    assert (cfg.initial_ammo_team0, cfg.initial_ammo_team1) == (8, 1)
    cfg = ablation_config(blast=5)
    assert (cfg.initial_blast_team0, cfg.initial_blast_team1) == (5, 2)
    assert ablation_config() == MatchConfig()
    grid = ablation_grid()
    assert set(grid) == {(1, 2), (3, 2), (5, 2), (8, 2), (1, 5), (1, 8)}
    assert shaping_config(False).reward_shaping_enabled is False


def test_ablation_warns_outside_studied_values():
    with pytest.warns(UserWarning, match="ammo=4"):
        cfg = ablation_config(ammo=4)
    assert cfg.initial_ammo_team0 == 4
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        ablation_config(ammo=3, blast=8)


def test_ablation_applies_to_playing_team_only():
    rec = run_episode(PolicyHandle("ST"), PolicyHandle("ST"), seed=0, config=ablation_config(5, 8, SHORT))
    final, _ = replay(rec)
    assert [a.ammo for a in final.agents] == [5, 1, 5, 1]
    assert [a.blast_strength for a in final.agents] == [8, 2, 8, 2]


def test_unshaped_rewards_are_terminal_only():
    rec = run_episode(PolicyHandle("SS"), PolicyHandle("ST"), seed=2, config=shaping_config(False, SHORT))
    for t in trajectories_of(rec):
        assert all(x == 0 for x in t.total[:-1])
        assert t.total[-1] == t.E


# -- export -----------------------------------------------------------------------


def test_export_ten_step_episode(tmp_path):
    rec = run_episode(PolicyHandle("ST"), PolicyHandle("SS"), seed=4, config=MatchConfig(max_steps=10))
    assert rec.length == 10
    for fmt in ("jsonl", "csv"):
        path = tmp_path / f"traj.{fmt}"
        assert export_trajectories([rec], path, fmt) == 20
        rows = load_trajectories(path)
        got = pairs(rows)
        assert len(got) == 20
        assert all(act_static(obs) == 0 and a == 0 for obs, a in got)


def test_export_round_trip_recomputes_rewards(tmp_path):
    recs = [run_episode(PolicyHandle("SS"), PolicyHandle("SS"), seed=s, episode_id=s) for s in range(3)]
    for fmt in ("jsonl", "csv"):
        path = tmp_path / f"traj.{fmt}"
        export_trajectories(recs, path, fmt)
        again = recompute_rewards(load_trajectories(path))
        for rec in recs:
            for t in trajectories_of(rec):
                assert again[(rec.episode_id, t.agent_id)] == t.total


def test_export_rejects_unknown_format(tmp_path):
    with pytest.raises(ValueError):
        export_trajectories([], tmp_path / "x.parquet", "parquet")


# -- property checks ----------------------------------------------------------------

cells = st.tuples(st.integers(0, 3), st.integers(0, 3))


@settings(max_examples=200, deadline=None)
@given(st.lists(cells, min_size=1, max_size=120), st.integers(0, 45))
def test_jitter_property_matches_oracle(positions, threshold):
    assert jitter_flags(positions, threshold).tolist() == jitter_oracle(positions, threshold)


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.floats(-10, 10), min_size=1, max_size=200),
    st.integers(1, 250),
)
def test_moving_average_stays_within_data_range(xs, window):
    sm = moving_average(xs, window)
    assert len(sm) == (1 if window > len(xs) else len(xs))
    assert (sm.mean >= min(xs) - 1e-9).all() and (sm.mean <= max(xs) + 1e-9).all()
    assert (sm.lower <= sm.mean + 1e-12).all() and (sm.upper >= sm.mean - 1e-12).all()
