"""Newline-delimited JSON protocol for out-of-process policies.

    -> {"type": "init", "agent_id": k, "config": {...}}   <- {"type": "ready"}
    -> {"type": "act", "step": t, "obs": {...}}            <- {"type": "action", "action": 0..5}
    -> {"type": "episode_end", "result": "win|loss|tie"}

Replies arriving after the per-move budget are dropped; the move is played
as Stop and counted as a fault. A dead endpoint raises ``EndpointCrashed``.
"""

from __future__ import annotations

import json
import logging
import queue
import shlex
import subprocess
import threading
import time
from dataclasses import dataclass, field
from typing import Sequence

from ..engine.constants import Action

log = logging.getLogger(__name__)

STARTUP_TIMEOUT_S = 10.0
_EOF = object()


class ExternalPolicyError(RuntimeError):
    pass


class EndpointCrashed(ExternalPolicyError):
    pass


@dataclass
class Fault:
    step: int
    kind: str  # "timeout" or "malformed"
    detail: str = ""


@dataclass
class ExternalEndpoint:
    """One child process speaking the protocol."""

    command: Sequence[str] | str
    budget_ms: float = 100.0
    faults: list[Fault] = field(default_factory=list)

    def __post_init__(self):
        self._proc = None
        self._replies: queue.Queue = queue.Queue()
        self._late = 0
        self._stderr_tail: list[str] = []

    @property
    def argv(self) -> list[str]:
        if isinstance(self.command, str):
            return shlex.split(self.command)
        return list(self.command)

    def start(self) -> None:
        if self._proc is not None and self._proc.poll() is None:
            return
        try:
            self._proc = subprocess.Popen(
                self.argv,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.PIPE,
                text=True,
                bufsize=1,
            )
        except OSError as exc:
            raise EndpointCrashed(f"cannot start endpoint {self.argv!r}: {exc}") from exc
        self._replies = queue.Queue()
        self._late = 0
        threading.Thread(target=self._read_stdout, daemon=True).start()
        threading.Thread(target=self._read_stderr, daemon=True).start()

    def _read_stdout(self):
        proc = self._proc
        for line in proc.stdout:
            self._replies.put(line)
        self._replies.put(_EOF)

    def _read_stderr(self):
        for line in self._proc.stderr:
            self._stderr_tail = (self._stderr_tail + [line.rstrip()])[-20:]

    def _send(self, msg: dict) -> None:
        try:
            self._proc.stdin.write(json.dumps(msg, separators=(",", ":")) + "\n")
            self._proc.stdin.flush()
        except (BrokenPipeError, OSError, ValueError) as exc:
            raise self._crashed(f"write failed: {exc}") from exc

    def _crashed(self, why: str) -> EndpointCrashed:
        code = self._proc.poll() if self._proc else None
        tail = "; ".join(self._stderr_tail[-5:])
        return EndpointCrashed(f"endpoint {self.argv!r} {why} (exit={code}) stderr: {tail}")

    def _receive(self, deadline: float):
        """Next reply line before ``deadline`` or None; raises on EOF."""
        remaining = deadline - time.monotonic()
        if remaining <= 0:
            return None
        try:
            line = self._replies.get(timeout=remaining)
        except queue.Empty:
            return None
        if line is _EOF:
            self._replies.put(_EOF)
            raise self._crashed("closed its output")
        return line

    def init(self, agent_id: int, config: dict) -> None:
        self.start()
        self._drain()
        self._send({"type": "init", "agent_id": agent_id, "config": config})
        deadline = time.monotonic() + STARTUP_TIMEOUT_S
        while True:
            line = self._receive(deadline)
            if line is None:
                raise ExternalPolicyError(f"endpoint {self.argv!r} did not answer init")
            try:
                msg = json.loads(line)
            except json.JSONDecodeError:
                continue
            if isinstance(msg, dict) and msg.get("type") == "ready":
                return

    def _drain(self) -> None:
        while True:
            try:
                line = self._replies.get_nowait()
            except queue.Empty:
                return
            if line is _EOF:
                self._replies.put(_EOF)
                raise self._crashed("closed its output")
            self._late = max(0, self._late - 1)

    def act(self, step: int, obs: dict) -> int:
        self._drain()
        self._send({"type": "act", "step": step, "obs": obs})
        deadline = time.monotonic() + self.budget_ms / 1000.0
        while True:
            line = self._receive(deadline)
            if line is None:
                self._late += 1
                self.faults.append(Fault(step, "timeout"))
                return int(Action.STOP)
            try:
                msg = json.loads(line)
            except json.JSONDecodeError:
                self.faults.append(Fault(step, "malformed", line.strip()[:80]))
                return int(Action.STOP)
            if isinstance(msg, dict) and "step" in msg and msg["step"] != step:
                continue  # reply to an earlier, timed-out request
            if self._late and not (isinstance(msg, dict) and "step" in msg):
                self._late -= 1
                continue
            action = msg.get("action") if isinstance(msg, dict) else None
            if isinstance(action, bool) or not isinstance(action, int) or not 0 <= action <= 5:
                self.faults.append(Fault(step, "malformed", line.strip()[:80]))
                return int(Action.STOP)
            return action

    def episode_end(self, result: str) -> None:
        if self._proc is not None and self._proc.poll() is None:
            try:
                self._send({"type": "episode_end", "result": result})
            except EndpointCrashed as exc:
                log.warning("%s", exc)

    def close(self) -> None:
        proc = self._proc
        if proc is None:
            return
        self._proc = None
        try:
            proc.stdin.close()
        except OSError:
            pass
        try:
            proc.wait(timeout=2)
        except subprocess.TimeoutExpired:
            proc.kill()
            proc.wait()
        for stream in (proc.stdout, proc.stderr):
            try:
                stream.close()
            except OSError:
                pass
