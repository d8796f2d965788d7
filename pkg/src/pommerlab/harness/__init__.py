"""Episode runner, tournaments, curriculum rollouts and analysis utilities."""

from .ablation import AMMO_VALUES, BLAST_VALUES, ablation_config, ablation_grid, shaping_config
from .export import export_trajectories, load_trajectories, pairs, recompute_rewards, trajectory_rows
from .jitter import JitterReport, detect_jitter, detect_jitter_many, jitter_flags, positions_from_records
from .metrics import Smoothed, discounted_returns, gae, moving_average
from .parallel import EpisodeJob, run_jobs
from .runner import SeatPool, Trajectory, episode_seed, run_episode, trajectories_of
from .tournament import DEFAULT_OPPONENTS, EvalReport, OpponentRow, run_tournament
from .training import Block, PhaseMeta, TrainingLog, log_row, plan_blocks, run_curriculum

__all__ = [
    "AMMO_VALUES", "BLAST_VALUES", "Block", "DEFAULT_OPPONENTS", "EpisodeJob", "EvalReport",
    "JitterReport", "OpponentRow", "PhaseMeta", "SeatPool", "Smoothed", "TrainingLog", "Trajectory",
    "ablation_config", "ablation_grid", "detect_jitter", "detect_jitter_many", "discounted_returns",
    "episode_seed", "export_trajectories", "gae", "jitter_flags", "load_trajectories", "log_row",
    "moving_average", "pairs", "plan_blocks", "positions_from_records", "recompute_rewards",
    "run_curriculum", "run_episode", "run_jobs", "run_tournament", "shaping_config",
    "trajectories_of", "trajectory_rows",
]
