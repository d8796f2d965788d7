"""Deterministic Pommerman team environment, scripted opponents, reward
tracking, curriculum schedules and an evaluation harness."""

__version__ = "0.1.0"
