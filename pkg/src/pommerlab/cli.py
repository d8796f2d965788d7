"""Command-line front end.

Settings resolve in this order, later winning: built-in defaults, the
``POMMERLAB_SEED`` / ``POMMERLAB_OUT_DIR`` environment variables, the JSON
file given with ``--config``, explicit flags. A config file holds command
settings at the top level and MatchConfig fields under ``"match"``; a run
manifest is also accepted as a config file, which reruns that command.

Exit codes: 0 success, 2 usage, 3 configuration or input, 4 runtime.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import shlex
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

from . import __version__
from .agents.external import ExternalPolicyError
from .agents.policy import TEAM_POLICIES, OpponentKind, PolicyHandle
from .curriculum import PRESET_NAMES, CurriculumError, CurriculumSchedule, preset, tally, validate
from .engine import ENGINE_VERSION, EpisodeRecord, MatchConfig, RecordError, replay
from .harness import (
    TrainingLog,
    detect_jitter_many,
    export_trajectories,
    plan_blocks,
    positions_from_records,
    run_curriculum,
    run_episode,
    run_tournament,
)
from .harness.jitter import load_positions_csv
from .harness.parallel import default_workers

log = logging.getLogger("pommerlab")

EXIT_OK, EXIT_USAGE, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3, 4
ENV_OUT = "POMMERLAB_OUT_DIR"
ENV_SEED = "POMMERLAB_SEED"


class ConfigError(Exception):
    pass


@dataclass
class RunManifest:
    command: str
    config_path: Optional[str]
    base_seed: int
    out_dir: str
    engine_version: str = ENGINE_VERSION
    package_version: str = __version__
    timestamp: str = ""
    argv: list = field(default_factory=list)
    settings: dict = field(default_factory=dict)
    match: dict = field(default_factory=dict)

    def write(self) -> Path:
        out = Path(self.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        path = out / "manifest.json"
        path.write_text(json.dumps(asdict(self), indent=2, sort_keys=True) + "\n")
        return path


# -- argument types -------------------------------------------------------


def _opponent(name: str) -> str:
    try:
        return OpponentKind.parse(name).value
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _team(name: str) -> str:
    key = name.strip().upper().replace("-", "_")
    if key in TEAM_POLICIES:
        return key
    return _opponent(name)


def _opponent_list(text: str) -> list:
    return [_opponent(p) for p in text.split(",") if p.strip()]


def _agent_list(text: str) -> list:
    try:
        ids = [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"agent ids must be integers, got {text!r}") from None
    if any(not 0 <= i <= 3 for i in ids):
        raise argparse.ArgumentTypeError("agent ids must lie in 0..3")
    return ids


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _schedule_name(text: str) -> str:
    if text not in PRESET_NAMES:
        raise argparse.ArgumentTypeError(f"unknown preset {text!r}; choose from {', '.join(PRESET_NAMES)}")
    return text


# -- settings -------------------------------------------------------------


def _load_config(path: Optional[str]) -> dict:
    if not path:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    if "settings" in data and "engine_version" in data:
        # A manifest: replay its resolved settings.
        data = {**data["settings"], "match": data.get("match", {})}
    return data


class Settings:
    """Flag > config file > environment > default lookup for one command."""

    def __init__(self, args, file_cfg: dict):
        self.args = args
        self.file = file_cfg
        self.resolved: dict = {}

    def get(self, key: str, default=None, env: Optional[str] = None, cast=None):
        value = getattr(self.args, key, None)
        if value is None and self.file.get(key) is not None:
            value = self.file[key]
            if cast is not None:
                try:
                    value = cast(value)
                except (TypeError, ValueError, argparse.ArgumentTypeError) as exc:
                    raise ConfigError(f"bad value for {key!r} in config: {exc}") from exc
        if value is None and env and os.environ.get(env):
            try:
                value = (cast or str)(os.environ[env])
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise ConfigError(f"bad value for {env}: {exc}") from exc
        if value is None:
            value = default
        self.resolved[key] = value
        return value

    def match_config(self) -> MatchConfig:
        fields = dict(self.file.get("match", {}))
        for key in ("max_steps", "view_radius"):
            v = getattr(self.args, key, None)
            if v is not None:
                fields[key] = v
        try:
            return MatchConfig.from_dict(fields)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad match config: {exc}") from exc


def _start(cmd: str, args, extra: dict) -> tuple[Settings, MatchConfig, int, Path]:
    st = Settings(args, _load_config(args.config))
    seed = st.get("seed", 0, ENV_SEED, int)
    out = Path(st.get("out", f"runs/{cmd}", ENV_OUT))
    for key, (default, cast) in extra.items():
        st.get(key, default, cast=cast)
    match = st.match_config()
    RunManifest(
        cmd,
        args.config,
        seed,
        str(out),
        timestamp=time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        argv=list(getattr(args, "argv", [])),
        settings={"command": cmd, **{k: v for k, v in st.resolved.items() if k != "out"}, "out": str(out)},
        match=match.to_dict(),
    ).write()
    return st, match, seed, out


def _handle(kind: str, seed: int, endpoint: Optional[str], budget_ms: float) -> PolicyHandle:
    ep = shlex.split(endpoint) if endpoint else None
    return PolicyHandle(kind, rng_seed=seed, endpoint=ep, budget_ms=budget_ms)


# -- commands -------------------------------------------------------------


def cmd_play(args) -> int:
    st, match, seed, out = _start("play", args, {
        "team": ("SS", _team), "opponent": ("ST", _opponent),
        "endpoint": (None, str), "budget_ms": (100.0, float), "record": (None, str),
    })
    r = st.resolved
    team = _handle(r["team"], 0, r["endpoint"], r["budget_ms"])
    opp = _handle(r["opponent"], 0, r["endpoint"], r["budget_ms"])
    record = run_episode(team, opp, seed, match)
    path = Path(r["record"]) if r["record"] else out / "episode.jsonl"
    record.save(path)
    _write_reward_log(record, out / "rewards.csv")
    if record.aborted:
        print(f"aborted: {record.aborted}", file=sys.stderr)
        return EXIT_RUNTIME
    res = record.result
    print(f"result: {res.for_team(0)} for team 0 ({res.cause.value}) after {record.length} steps")
    for aid, rw in sorted(record.extras["rewards"].items()):
        print(f"agent {aid}: E={rw['E']:+.2f} K={rw['K']:+.2f} sum_T={sum(rw['T']):.2f} total={sum(rw['total']):+.4f}")
    print(f"record: {path} hash {record.final_hash}")
    return EXIT_OK


def _write_reward_log(record: EpisodeRecord, path: Path) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["step", "agent_id", "T", "E", "K", "total"])
        for aid, rw in sorted(record.extras["rewards"].items()):
            last = len(rw["T"]) - 1
            for t, (T, tot) in enumerate(zip(rw["T"], rw["total"])):
                E, K = (rw["E"], rw["K"]) if t == last and record.result is not None else (0.0, 0.0)
                w.writerow([t + 1, aid, round(T, 6), E, K, round(tot, 6)])


def cmd_tournament(args) -> int:
    st, match, seed, out = _start("tournament", args, {
        "team": ("SS", _team), "opponents": (["ST", "SS", "SS_NB", "EXT"], _cast_list),
        "games_per_opponent": (500, int), "workers": (default_workers(), int),
        "endpoint": (None, str), "budget_ms": (100.0, float), "records": (False, bool),
    })
    r = st.resolved
    team = _handle(r["team"], 0, r["endpoint"], r["budget_ms"])
    opps = [_handle(o, 0, r["endpoint"], r["budget_ms"]) for o in r["opponents"]]
    report = run_tournament(
        team, opps, r["games_per_opponent"], seed, match, r["workers"],
        records_out=out / "records" if r["records"] else None,
    )
    report.write(out)
    print(report.table())
    print(f"{report.total_games} games; report in {out}")
    aborted = sum(row.aborted for row in report.rows)
    if aborted:
        print(f"{aborted} games aborted by endpoint failures", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def _cast_list(v):
    if isinstance(v, str):
        return _opponent_list(v)
    return [_opponent(x) for x in v]


def cmd_curriculum(args) -> int:
    st, match, seed, out = _start("curriculum", args, {
        "preset": ("agent0", _schedule_name), "schedule": (None, str), "policy": ("SS", _team),
        "endpoint": (None, str), "budget_ms": (100.0, float), "parallel": (64, int),
        "workers": (default_workers(), int), "max_games": (None, int), "dry_run": (False, bool),
    })
    r = st.resolved
    try:
        schedule = CurriculumSchedule.load(r["schedule"]) if r["schedule"] else preset(r["preset"])
    except (OSError, ValueError, KeyError) as exc:
        raise ConfigError(f"cannot load schedule: {exc}") from exc
    problem = validate(schedule)
    if problem is not None:
        raise ConfigError(f"invalid schedule: {problem}")
    schedule.save(out / "schedule.json")
    counts = {k: 0 for k in OpponentKind}
    aborted = []
    if r["dry_run"]:
        for metas in plan_blocks(schedule, r["parallel"], seed, r["max_games"]):
            for m in metas:
                counts[m.opponent] += 1
    else:
        team = _handle(r["policy"], 0, r["endpoint"], r["budget_ms"])
        with TrainingLog(out / "training_log.csv") as tlog:
            for block in run_curriculum(schedule, team, r["parallel"], r["workers"], seed,
                                        max_games=r["max_games"], config=match):
                tlog.add(block)
                for rec, m in block.episodes:
                    counts[m.opponent] += 1
                    if rec.aborted:
                        aborted.append(rec.episode_id)
                        print(f"episode {rec.episode_id} aborted: {rec.aborted}", file=sys.stderr)
    target = tally(schedule, seed=seed)
    print(f"{'opponent':<8} {'played':>8} {'target':>8}")
    for k in OpponentKind:
        print(f"{k.value:<8} {counts[k]:>8} {target[k]:>8}")
    print(f"{'total':<8} {sum(counts.values()):>8} {schedule.total_games:>8}")
    (out / "tallies.json").write_text(json.dumps(
        {"played": {k.value: v for k, v in counts.items()}, "target": {k.value: v for k, v in target.items()}},
        indent=2, sort_keys=True) + "\n")
    return EXIT_RUNTIME if aborted else EXIT_OK


def _load_records(paths) -> list:
    records = []
    for p in paths:
        try:
            records.append(EpisodeRecord.load(p))
        except OSError as exc:
            raise ConfigError(f"cannot read {p}: {exc}") from exc
        except RecordError as exc:
            raise ConfigError(f"{p}: {exc}") from exc
    return records


def cmd_replay(args) -> int:
    _start("replay", args, {})
    invalid = mismatched = 0
    for p in args.records:
        try:
            rec = EpisodeRecord.load(p)
            final, _ = replay(rec)
        except OSError as exc:
            raise ConfigError(f"cannot read {p}: {exc}") from exc
        except RecordError as exc:
            print(f"{p}: invalid ({exc})")
            invalid += 1
            continue
        if rec.final_hash is not None and final.hash() == rec.final_hash:
            print(f"{p}: verified")
        else:
            print(f"{p}: MISMATCH (stored {rec.final_hash}, replayed {final.hash()})")
            mismatched += 1
    if invalid:
        return EXIT_CONFIG
    return EXIT_RUNTIME if mismatched else EXIT_OK


def cmd_jitter(args) -> int:
    st, _, _, out = _start("jitter", args, {
        "threshold": (40, int), "bin": (50, int), "agents": ([0, 2], list),
    })
    r = st.resolved
    series = positions_from_records(_load_records(args.records), r["agents"])
    for p in args.positions or []:
        try:
            series.append(load_positions_csv(p))
        except (OSError, ValueError, IndexError) as exc:
            raise ConfigError(f"cannot read positions {p}: {exc}") from exc
    if not series:
        raise ConfigError("no position series to analyse")
    try:
        report = detect_jitter_many(series, r["threshold"], r["bin"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    path = report.write_csv(out / "jitter.csv")
    for s, f in zip(report.bin_starts, report.bins):
        print(f"[{s},{s + report.bin}) {f:.3f}")
    print(f"{report.flagged_steps}/{report.total_steps} steps flagged over {report.games} series; {path}")
    return EXIT_OK


def cmd_export(args) -> int:
    st, _, _, out = _start("export", args, {"format": ("jsonl", str), "agents": ([0, 2], list)})
    r = st.resolved
    records = _load_records(args.records)
    path = out / f"trajectories.{r['format']}"
    n = export_trajectories(records, path, r["format"], r["agents"])
    print(f"{n} (observation, action) pairs from {len(records)} records -> {path}")
    return EXIT_OK


# -- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pommerlab", description="Pommerman team-mode training and evaluation tools.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({ENGINE_VERSION})")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON config file (or a previous run's manifest.json)")
        sp.add_argument("--seed", type=int, help=f"base seed (env {ENV_SEED}, default 0)")
        sp.add_argument("--out", help=f"output directory (env {ENV_OUT}, default runs/<command>)")

    def match_flags(sp):
        sp.add_argument("--max-steps", type=_positive, dest="max_steps")
        sp.add_argument("--view-radius", type=_nonneg, dest="view_radius")

    def external(sp):
        sp.add_argument("--endpoint", help="command line of an external policy, used for EXT seats")
        sp.add_argument("--budget-ms", type=float, dest="budget_ms", help="per-move budget for EXT seats")

    sp = sub.add_parser("play", help="play one episode")
    common(sp)
    match_flags(sp)
    external(sp)
    sp.add_argument("--team", type=_team)
    sp.add_argument("--opponent", type=_opponent)
    sp.add_argument("--record", help="record path (default <out>/episode.jsonl)")
    sp.set_defaults(func=cmd_play)

    sp = sub.add_parser("tournament", help="evaluate a team against opponent kinds")
    common(sp)
    match_flags(sp)
    external(sp)
    sp.add_argument("--team", type=_team)
    sp.add_argument("--opponents", type=_opponent_list, help="comma-separated kinds (default ST,SS,SS_NB,EXT)")
    sp.add_argument("--games-per-opponent", type=_nonneg, dest="games_per_opponent")
    sp.add_argument("--workers", type=_positive, help="worker processes (default: CPU count)")
    sp.add_argument("--records", action="store_const", const=True, help="save every episode record")
    sp.set_defaults(func=cmd_tournament)

    sp = sub.add_parser("curriculum", help="run (or count) a curriculum schedule")
    common(sp)
    match_flags(sp)
    external(sp)
    sp.add_argument("--preset", type=_schedule_name)
    sp.add_argument("--schedule", help="schedule JSON file instead of a preset")
    sp.add_argument("--policy", type=_team, help="policy in the learning seats (EXT uses --endpoint)")
    sp.add_argument("--parallel", type=_positive, help="games per block (default 64)")
    sp.add_argument("--workers", type=_positive)
    sp.add_argument("--max-games", type=_nonneg, dest="max_games")
    sp.add_argument("--dry-run", action="store_const", const=True, dest="dry_run",
                    help="draw opponent assignments without playing")
    sp.set_defaults(func=cmd_curriculum)

    sp = sub.add_parser("replay", help="verify episode records by replaying them")
    common(sp)
    sp.add_argument("records", nargs="+")
    sp.set_defaults(func=cmd_replay)

    sp = sub.add_parser("jitter", help="jitter/dormancy analysis of position series")
    common(sp)
    sp.add_argument("records", nargs="*")
    sp.add_argument("--positions", action="append", help="row,col CSV of one position series")
    sp.add_argument("--threshold", type=_positive)
    sp.add_argument("--bin", type=_positive)
    sp.add_argument("--agents", type=_agent_list)
    sp.set_defaults(func=cmd_jitter)

    sp = sub.add_parser("export", help="export (observation, action) datasets")
    common(sp)
    sp.add_argument("records", nargs="*")
    sp.add_argument("--format", choices=("jsonl", "csv"))
    sp.add_argument("--agents", type=_agent_list)
    sp.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.argv = argv
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"pommerlab: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CurriculumError as exc:
        print(f"pommerlab: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ExternalPolicyError, OSError) as exc:
        print(f"pommerlab: runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
