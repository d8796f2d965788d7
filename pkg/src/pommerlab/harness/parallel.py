"""Process pool over independent episodes with results in submission order."""

from __future__ import annotations

import multiprocessing as mp
import os
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from ..agents.policy import PolicyHandle
from ..engine import EpisodeRecord, MatchConfig
from .runner import SeatPool, run_episode


@dataclass(frozen=True)
class EpisodeJob:
    episode_id: int
    seed: int
    team: PolicyHandle
    opponent: PolicyHandle
    config: MatchConfig
    value_only: bool = False
    extras: Optional[dict] = None


_WORKER_POOL: Optional[SeatPool] = None


def _run(job: EpisodeJob) -> EpisodeRecord:
    global _WORKER_POOL
    if _WORKER_POOL is None:
        _WORKER_POOL = SeatPool()
    return run_episode(
        job.team,
        job.opponent,
        job.seed,
        job.config,
        job.episode_id,
        pool=_WORKER_POOL,
        value_only=job.value_only,
        extras=job.extras,
    )


def warm_up() -> None:
    """Compile (or load) every kernel once so forked workers inherit them."""
    from ..agents.policy import PolicyHandle as H

    run_episode(H("SS"), H("HUNTER"), seed=0, config=MatchConfig(max_steps=40), pool=SeatPool())


def default_workers() -> int:
    return max(1, os.cpu_count() or 1)


def run_jobs(jobs: Iterable[EpisodeJob], workers: int = 1, chunksize: int = 4) -> Iterator[EpisodeRecord]:
    """Yield one record per job, in job order, whatever ``workers`` is."""
    jobs = list(jobs)
    if workers <= 1 or len(jobs) <= 1:
        pool = SeatPool()
        try:
            for job in jobs:
                yield run_episode(
                    job.team, job.opponent, job.seed, job.config, job.episode_id,
                    pool=pool, value_only=job.value_only, extras=job.extras,
                )
        finally:
            pool.close()
        return
    warm_up()
    ctx = mp.get_context("fork")
    with ctx.Pool(workers) as procs:
        yield from procs.imap(_run, jobs, chunksize=chunksize)
