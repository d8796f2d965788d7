"""Exit criteria, each run at full size and stated tolerance.

Every test prints one ``[PASS]`` or ``[FAIL]`` line. Run alone with
``pytest -m acceptance -v``.
"""

import json
import random
import re
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from pommerlab import tracker as tk
from pommerlab.cli import main
from pommerlab.curriculum import PRESET_NAMES, phase_tallies, preset, validate
from pommerlab.engine import EpisodeRecord, MatchConfig
from pommerlab.harness import detect_jitter, gae, jitter_flags, run_jobs, run_tournament
from pommerlab.harness.tournament import tournament_jobs
from pommerlab.agents import PolicyHandle
from test_curriculum import TABLE, WARMUP
from util import gae_oracle, jitter_oracle, mc_advantage, synthetic_series, tracker_suite

pytestmark = pytest.mark.acceptance
TESTS = Path(__file__).parent


@pytest.fixture
def verdict(capsys):
    def emit(name, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        assert ok, detail

    return emit


def test_reward_constants(verdict):
    values = (tk.NEW_CELL_REWARD, tk.POWERUP_REWARD, tk.WOOD_REWARD,
              tk.OPPONENT_KILL_VALUE, tk.TEAMMATE_KILL_VALUE, tk.OWN_DEATH_VALUE)
    composed = tk.compose(1.0, 0.5, 0.02, True)
    ok = values == (0.01, 0.01, 0.01, 0.50, -0.50, -1.00) and composed == 0.77
    ok = ok and tk.compose(0.0, 0.0, 0.01, False) == 0.01
    verdict("reward constants", ok, f"constants {values}, terminal example {composed}")


def test_curriculum_budgets(verdict):
    t0 = time.perf_counter()
    bad = []
    for name in PRESET_NAMES:
        sched = preset(name)
        got = phase_tallies(sched)
        if validate(sched) is not None or got[0] != WARMUP or got[1:] != TABLE[name] or sched.total_games != 100_000:
            bad.append(name)
    dt = time.perf_counter() - t0
    verdict("curriculum budgets", not bad and dt < 1.0,
            f"{len(PRESET_NAMES) - len(bad)}/{len(PRESET_NAMES)} presets exact in {dt:.3f}s (limit 1s)")


def test_engine_correctness(verdict):
    t0 = time.perf_counter()
    p = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider",
         str(TESTS / "test_engine_scenarios.py"),
         str(TESTS / "test_engine_props.py") + "::test_thousand_boards_symmetric_and_connected",
         str(TESTS / "test_engine_props.py") + "::test_hundred_random_episodes_replay_bit_identically"],
        capture_output=True, text=True, cwd=TESTS.parent,
    )
    dt = time.perf_counter() - t0
    passed = int(m.group(1)) if (m := re.search(r"(\d+) passed", p.stdout)) else 0
    failed = re.search(r"(\d+) failed", p.stdout)
    ok = p.returncode == 0 and not failed and passed >= 22 and dt < 30
    verdict("engine correctness", ok,
            f"{passed - 2} scenarios + 1000 boards + 100 replays passed, {dt:.1f}s (limit 30s)")


def test_tracker_attribution(verdict):
    t0 = time.perf_counter()
    full_bad, false_pos, missed, truth = tracker_suite(500)
    dt = time.perf_counter() - t0
    ok = full_bad == 0 and false_pos == 0 and truth > 0 and dt < 120
    verdict("tracker attribution", ok,
            f"500 SS-vs-SS games, {truth} own-bomb kills; full view mismatches {full_bad}, "
            f"default view false positives {false_pos} (missed {missed}), {dt:.1f}s (limit 120s)")


def test_jitter_analyzer(verdict):
    rng = random.Random(2024)
    alt60 = [(3, 4) if k % 2 == 0 else (3, 5) for k in range(60)]
    dorm39 = [(5, 5)] * 39 + [(5, 6), (6, 6), (7, 6), (8, 6)]
    series = [alt60, dorm39] + [synthetic_series(rng) for _ in range(998)]
    mismatched = sum(jitter_flags(x).tolist() != jitter_oracle(x, 40) for x in series)
    fixtures = detect_jitter(alt60).bins == [1.0, 0.2] and not jitter_flags(dorm39).any()
    verdict("jitter analyzer", mismatched == 0 and fixtures,
            f"{len(series) - mismatched}/{len(series)} series equal the definition oracle; fixtures {'ok' if fixtures else 'wrong'}")


def test_gae(verdict):
    rng = np.random.default_rng(2024)
    worst = worst95 = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 120))
        r = rng.normal(size=n)
        v = rng.normal(size=n + 1)
        worst = max(worst, float(np.max(np.abs(gae(r, v, 0.99, 1.0) - mc_advantage(r, v, 0.99)))))
        worst95 = max(worst95, float(np.max(np.abs(gae(r, v, 0.99, 0.95) - gae_oracle(r, v, 0.99, 0.95)))))
    verdict("GAE", worst <= 1e-9 and worst95 <= 1e-9,
            f"max |delta| {worst:.2e} at lambda=1 and {worst95:.2e} at lambda=0.95 over 1000 series (limit 1e-9)")


def test_evaluation_protocol(verdict, tmp_path, capsys):
    t0 = time.perf_counter()
    code = main(["tournament", "--team", "SS", "--games-per-opponent", "500", "--out", str(tmp_path / "ss")])
    code_st = main(["tournament", "--team", "ST", "--opponents", "ST", "--games-per-opponent", "500",
                    "--out", str(tmp_path / "st")])
    capsys.readouterr()
    dt = time.perf_counter() - t0
    rep = json.loads((tmp_path / "ss" / "eval_report.json").read_text())
    st = json.loads((tmp_path / "st" / "eval_report.json").read_text())
    rows = {r["opponent"]: r for r in rep["rows"]}
    games = sum(r["games"] for r in rep["rows"])
    partition = all(abs(r["W"] + r["L"] + r["T"] - 1.0) <= 3e-6 for r in rep["rows"])
    cols = (tmp_path / "ss" / "eval_report.csv").read_text().splitlines()[0]
    ss_w = rows["ST"]["W"]
    st_t = st["rows"][0]["T"]
    ok = (code == 0 and code_st == 0 and games == 2000 and list(rows) == ["ST", "SS", "SS_NB", "EXT"]
          and partition and cols == "opponent,games,wins,losses,ties,aborted,W,L,T" and ss_w > 0.5 and st_t == 1.0)
    table = ", ".join(f"{k} {r['W']:.3f}/{r['L']:.3f}/{r['T']:.3f}" for k, r in rows.items())
    verdict("evaluation protocol", ok,
            f"{games} games, W/L/T {table}; SS beats ST {ss_w:.3f} (>0.5), ST-vs-ST ties {st_t:.3f}, {dt:.0f}s")


def test_performance_and_parallelism(verdict, tmp_path):
    cfg = MatchConfig()
    t0 = time.perf_counter()
    rep8 = run_tournament("SS", ["ST"], games_per_opponent=2000, config=cfg, workers=8, records_out=tmp_path / "rec")
    dt = time.perf_counter() - t0
    verdict("performance smoke", rep8.total_games == 2000 and dt < 300,
            f"2000 SS-vs-ST games at 8 workers in {dt:.1f}s (limit 300s)")

    # Serial rerun of a subset must reproduce every saved record byte for byte.
    jobs = tournament_jobs(PolicyHandle("SS"), [PolicyHandle("ST")], 2000, 0, cfg)
    subset = jobs[::8]
    diff = 0
    for rec in run_jobs(subset, workers=1):
        saved = (tmp_path / "rec" / f"episode_{rec.episode_id:06d}.jsonl").read_text()
        diff += rec.dumps() != saved
    small1 = run_tournament("SS", ["ST", "SS"], games_per_opponent=50, workers=1, base_seed=9)
    small8 = run_tournament("SS", ["ST", "SS"], games_per_opponent=50, workers=8, base_seed=9)
    same = small1.to_csv() == small8.to_csv() and small1.to_json() == small8.to_json()
    verdict("parallelism invariance", diff == 0 and same,
            f"{len(subset) - diff}/{len(subset)} records identical serially; 100-game report bytes "
            f"{'identical' if same else 'differ'} at 1 vs 8 workers")
