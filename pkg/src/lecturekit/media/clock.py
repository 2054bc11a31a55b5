"""Clock abstraction so timed behavior is testable without sleeping.

ManualClock is fully deterministic: time only moves when advance() is
called, and due callbacks fire in (due-time, scheduling-order) sequence.
ScaledClock maps scheduled delays onto real threading timers, optionally
compressed by a speed factor so end-to-end runs finish quickly.
"""

from __future__ import annotations

import heapq
import threading
import time
from typing import Callable, Protocol


class TimerHandle:
    __slots__ = ("_cancel", "cancelled")

    def __init__(self, cancel: Callable[[], None] | None = None) -> None:
        self._cancel = cancel
        self.cancelled = False

    def cancel(self) -> None:
        self.cancelled = True
        if self._cancel is not None:
            self._cancel()


class Clock(Protocol):
    def now(self) -> float: ...

    def schedule(self, delay_sec: float, callback: Callable[[], None]) -> TimerHandle: ...


class ManualClock:
    def __init__(self, start: float = 0.0) -> None:
        self._now = start
        self._heap: list[tuple[float, int, Callable[[], None], TimerHandle]] = []
        self._seq = 0

    def now(self) -> float:
        return self._now

    def schedule(self, delay_sec: float, callback: Callable[[], None]) -> TimerHandle:
        handle = TimerHandle()
        due = self._now + max(delay_sec, 0.0)
        heapq.heappush(self._heap, (due, self._seq, callback, handle))
        self._seq += 1
        return handle

    def advance(self, dt: float) -> None:
        """Move time forward, firing every callback that comes due."""
        target = self._now + max(dt, 0.0)
        while self._heap and self._heap[0][0] <= target:
            due, _, callback, handle = heapq.heappop(self._heap)
            self._now = max(self._now, due)
            if not handle.cancelled:
                callback()
        self._now = target

    def run_until_idle(self, max_events: int = 10000) -> None:
        """Fire all pending callbacks regardless of their due time."""
        fired = 0
        while self._heap and fired < max_events:
            due, _, callback, handle = heapq.heappop(self._heap)
            self._now = max(self._now, due)
            fired += 1
            if not handle.cancelled:
                callback()

    @property
    def pending(self) -> int:
        return sum(1 for _, _, _, h in self._heap if not h.cancelled)


class ScaledClock:
    """Real-time clock; ``speed`` > 1 compresses scheduled delays."""

    def __init__(self, speed: float = 1.0) -> None:
        if speed <= 0:
            raise ValueError("speed must be positive")
        self.speed = speed
        self._t0 = time.monotonic()

    def now(self) -> float:
        return (time.monotonic() - self._t0) * self.speed

    def schedule(self, delay_sec: float, callback: Callable[[], None]) -> TimerHandle:
        timer = threading.Timer(max(delay_sec, 0.0) / self.speed, callback)
        timer.daemon = True
        timer.start()
        return TimerHandle(cancel=timer.cancel)
