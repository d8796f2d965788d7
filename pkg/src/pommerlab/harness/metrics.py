"""Advantage estimation and smoothed training curves."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import kernels

REWARD_WINDOW = 2000
LENGTH_WINDOW = 5000
BAND_Z = 1.96


def gae(rewards, values, gamma: float = 0.99, lam: float = 0.95) -> np.ndarray:
    """Generalized advantage estimates.

    ``values`` holds one entry per reward plus the bootstrap value of the
    state after the last reward (0 for a terminal state).
    """
    r = np.ascontiguousarray(rewards, dtype=np.float64)
    v = np.ascontiguousarray(values, dtype=np.float64)
    if r.ndim != 1 or v.ndim != 1:
        raise ValueError("rewards and values must be 1-D")
    if v.shape[0] != r.shape[0] + 1:
        raise ValueError(f"need len(values) == len(rewards) + 1, got {v.shape[0]} and {r.shape[0]}")
    return kernels.gae(r, v, float(gamma), float(lam))


def discounted_returns(rewards, gamma: float = 0.99, bootstrap: float = 0.0) -> np.ndarray:
    out = np.zeros(len(rewards))
    running = bootstrap
    for t in range(len(rewards) - 1, -1, -1):
        running = rewards[t] + gamma * running
        out[t] = running
    return out


@dataclass
class Smoothed:
    mean: np.ndarray
    lower: np.ndarray
    upper: np.ndarray

    def __len__(self):
        return len(self.mean)


def moving_average(series, window: int, z: float = BAND_Z) -> Smoothed:
    """Trailing mean with a ``mean +- z * std`` band.

    Early points average over what is available so far. The band uses the
    sample standard deviation of the window (zero for a one-point window). A
    window longer than the series collapses to a single aggregate point.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    x = np.asarray(series, dtype=np.float64)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("series must be a non-empty 1-D sequence")
    if window > x.size:
        m = x.mean()
        s = x.std(ddof=1) if x.size > 1 else 0.0
        return Smoothed(np.array([m]), np.array([m - z * s]), np.array([m + z * s]))
    if window == 1:
        return Smoothed(x.copy(), x.copy(), x.copy())
    idx = np.arange(x.size)
    lo = np.maximum(0, idx - window + 1)
    n = (idx - lo + 1).astype(np.float64)
    # Sums are taken relative to the first value, so a constant series
    # gives back exactly that constant and a zero band.
    d = x - x[0]
    cd = np.concatenate([[0.0], np.cumsum(d)])
    c2 = np.concatenate([[0.0], np.cumsum(d * d)])
    sd = cd[idx + 1] - cd[lo]
    mean = x[0] + sd / n
    ss = c2[idx + 1] - c2[lo] - sd * sd / n
    var = np.where(n > 1, np.maximum(ss, 0.0) / np.maximum(n - 1, 1), 0.0)
    std = np.sqrt(var)
    return Smoothed(mean, mean - z * std, mean + z * std)
