"""Detection of dormant and back-and-forth behaviour in position series.

A step is flagged when it lies inside a maximal run longer than the
threshold during which the agent either stays on one cell or alternates
strictly between two adjacent cells.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .. import kernels

DORMANCY_THRESHOLD = 40
BIN = 50


@dataclass
class JitterReport:
    bins: list = field(default_factory=list)
    bin: int = BIN
    games: int = 1
    flagged_steps: int = 0
    total_steps: int = 0

    @property
    def bin_starts(self) -> list[int]:
        return [i * self.bin for i in range(len(self.bins))]

    def to_csv(self) -> str:
        lines = ["bin_start,fraction"]
        lines += [f"{s},{f:.6f}" for s, f in zip(self.bin_starts, self.bins)]
        return "\n".join(lines) + "\n"

    def write_csv(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_csv())
        return path


def _as_array(positions) -> np.ndarray:
    p = np.asarray(positions, dtype=np.int64)
    if p.size == 0:
        raise ValueError("empty position series")
    if p.ndim != 2 or p.shape[1] != 2:
        raise ValueError("positions must be a sequence of (row, col) pairs")
    return p


def jitter_flags(positions, dormancy_threshold: int = DORMANCY_THRESHOLD) -> np.ndarray:
    p = _as_array(positions)
    return kernels.jitter_flags(np.ascontiguousarray(p[:, 0]), np.ascontiguousarray(p[:, 1]), int(dormancy_threshold))


def _bin_fractions(flags: np.ndarray, bin: int) -> np.ndarray:
    # Every bin divides by its nominal width, including a partial last bin.
    nbins = -(-flags.size // bin)
    counts = np.add.reduceat(flags.astype(np.int64), np.arange(0, flags.size, bin)) if flags.size else []
    return np.asarray(counts, dtype=np.float64)[:nbins] / bin


def detect_jitter(positions, dormancy_threshold: int = DORMANCY_THRESHOLD, bin: int = BIN) -> JitterReport:
    """Per-bin flagged fraction for one agent's position series."""
    if bin < 1:
        raise ValueError("bin must be >= 1")
    flags = jitter_flags(positions, dormancy_threshold)
    fr = _bin_fractions(flags, bin)
    return JitterReport(fr.tolist(), bin, 1, int(flags.sum()), int(flags.size))


def detect_jitter_many(series: Sequence, dormancy_threshold: int = DORMANCY_THRESHOLD, bin: int = BIN) -> JitterReport:
    """Bin-wise mean over games; a bin averages only games that reach it."""
    if len(series) == 0:
        raise ValueError("no position series given")
    reports = [detect_jitter(s, dormancy_threshold, bin) for s in series]
    width = max(len(r.bins) for r in reports)
    sums = np.zeros(width)
    counts = np.zeros(width)
    for r in reports:
        k = len(r.bins)
        sums[:k] += r.bins
        counts[:k] += 1
    return JitterReport(
        (sums / counts).tolist(),
        bin,
        len(reports),
        sum(r.flagged_steps for r in reports),
        sum(r.total_steps for r in reports),
    )


def positions_from_records(records, agent_ids=(0, 2)) -> list:
    """Where each agent stood after every step, one series per (record, agent).

    The runner also stores the start cell at index 0; it precedes any action
    and is left out here.
    """
    out = []
    for rec in records:
        pos = rec.extras.get("positions", {})
        for a in agent_ids:
            if len(pos.get(str(a), ())) > 1:
                out.append(pos[str(a)][1:])
    return out


def load_positions_csv(path) -> list:
    """Read a ``row,col`` CSV (header optional) as one position series."""
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.reader(fh):
            if not rec or not rec[0].strip().lstrip("-").isdigit():
                continue
            rows.append((int(rec[0]), int(rec[1])))
    return rows
