"""Per-session ordered event buffer with server-sent-event rendering.

Each session owns one buffer. Emission assigns strictly increasing
sequence numbers starting at 1; readers can replay from any point and
then follow live. Rendering matches the SSE wire format: the sequence
number travels as the event id so clients can resume with Last-Event-ID.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Iterator, Optional

from ..jsonio import canonical_dumps

EVENT_KINDS = (
    "overlayShow",
    "overlayHide",
    "speechStatus",
    "highlightSet",
    "quizPrompt",
    "examplePrompt",
    "resume",
    "breakStart",
    "breakEnd",
)


@dataclass(frozen=True)
class SessionEvent:
    seq: int
    kind: str
    payload: dict

    def to_json(self) -> dict:
        return {"seq": self.seq, "kind": self.kind, "payload": self.payload}

    def to_sse(self) -> str:
        data = canonical_dumps(self.to_json(), indent=None)
        return f"id: {self.seq}\nevent: {self.kind}\ndata: {data}\n\n"


class EventBuffer:
    """Append-only event list; thread-safe for one writer, many readers."""

    def __init__(self) -> None:
        self._events: list[SessionEvent] = []
        self._cond = threading.Condition()

    def emit(self, kind: str, payload: dict) -> SessionEvent:
        if kind not in EVENT_KINDS:
            raise ValueError(f"unknown event kind {kind!r}")
        with self._cond:
            event = SessionEvent(seq=len(self._events) + 1, kind=kind, payload=payload)
            self._events.append(event)
            self._cond.notify_all()
        return event

    def __len__(self) -> int:
        with self._cond:
            return len(self._events)

    def after(self, seq: int) -> list[SessionEvent]:
        """Every event with a sequence number greater than ``seq``."""
        with self._cond:
            return list(self._events[max(seq, 0) :])

    def wait_after(self, seq: int, timeout: float) -> list[SessionEvent]:
        """Like ``after`` but blocks up to ``timeout`` for the first new event."""
        with self._cond:
            if len(self._events) <= seq:
                self._cond.wait(timeout)
            return list(self._events[max(seq, 0) :])

    def stream_sse(
        self,
        after: int = 0,
        *,
        max_events: Optional[int] = None,
        idle_timeout_sec: Optional[float] = None,
        poll_sec: float = 0.25,
    ) -> Iterator[str]:
        """SSE frames from ``after`` onward; runs until a stop condition.

        Endless by default (keepalive comments while idle); scripted
        clients pass ``max_events`` or ``idle_timeout_sec`` so the stream
        terminates on its own.
        """
        sent = max(after, 0)
        delivered = 0
        idle = 0.0
        while True:
            fresh = self.wait_after(sent, poll_sec)
            if fresh:
                idle = 0.0
                for event in fresh:
                    yield event.to_sse()
                    sent = event.seq
                    delivered += 1
                    if max_events is not None and delivered >= max_events:
                        return
            else:
                idle += poll_sec
                if idle_timeout_sec is not None and idle >= idle_timeout_sec:
                    return
                yield ": keepalive\n\n"
