"""Speech delivery: jobs, status schedules and the one-job-per-channel rule.

Every job emits status events queued -> speaking -> then exactly one
terminal event (done or failed), including when the avatar backend is down:
the channel degrades to a text-only job that still completes after the
estimated speaking time, so auto-resume logic upstream never stalls.
"""

from __future__ import annotations

import itertools
import logging
import os
import threading
from dataclasses import dataclass, field
from typing import Callable, Optional, Protocol

from ..errors import AvatarSessionUnavailable, PreconditionFailed
from .clock import Clock, TimerHandle

log = logging.getLogger(__name__)

WORDS_PER_MINUTE = 150.0
SPEAKING_START_DELAY_SEC = 0.5  # queued -> speaking

QUEUED = "queued"
SPEAKING = "speaking"
DONE = "done"
FAILED = "failed"
TERMINAL = (DONE, FAILED)

_job_ids = itertools.count(1)


def estimate_duration_sec(text: str) -> float:
    return len(text.split()) / (WORDS_PER_MINUTE / 60.0)


@dataclass
class SpeechJob:
    text: str
    voice_id: str
    job_id: int = field(default_factory=lambda: next(_job_ids))
    status: str = QUEUED
    estimated_duration_sec: float = 0.0
    degraded: bool = False  # text-only fallback, timed but unspoken
    error: Optional[str] = None

    def __post_init__(self) -> None:
        if not self.text.strip():
            raise PreconditionFailed("speech text must be non-empty")
        self.estimated_duration_sec = estimate_duration_sec(self.text)

    @property
    def terminal(self) -> bool:
        return self.status in TERMINAL


StatusCallback = Callable[[SpeechJob, str], None]


class SpeechProvider(Protocol):
    def start(self, job: SpeechJob, clock: Clock, emit: StatusCallback) -> list[TimerHandle]:
        """Begin delivery; returns cancellable handles for pending events."""
        ...


class StubSpeechProvider:
    """Deterministic schedule: speaking at +0.5 s, done at +0.5 s + estimate."""

    def start(self, job: SpeechJob, clock: Clock, emit: StatusCallback) -> list[TimerHandle]:
        emit(job, QUEUED)
        handles = [
            clock.schedule(SPEAKING_START_DELAY_SEC, lambda: emit(job, SPEAKING)),
            clock.schedule(
                SPEAKING_START_DELAY_SEC + job.estimated_duration_sec,
                lambda: emit(job, DONE),
            ),
        ]
        return handles


class HttpAvatarProvider:
    """Placeholder for a hosted avatar/TTS session.

    Requires credentials; without them every start attempt raises, which
    exercises the channel's degraded text-only path.
    """

    def __init__(self, api_key: str | None = None) -> None:
        self.api_key = api_key or os.environ.get("AVATAR_API_KEY") or os.environ.get("TTS_API_KEY")

    def start(self, job: SpeechJob, clock: Clock, emit: StatusCallback) -> list[TimerHandle]:
        if not self.api_key:
            raise AvatarSessionUnavailable("no avatar credentials configured")
        raise AvatarSessionUnavailable("avatar streaming is not wired in this build")


def speech_provider_from_env() -> SpeechProvider:
    if os.environ.get("MEDIA_MOCK") == "1" or not (
        os.environ.get("AVATAR_API_KEY") or os.environ.get("TTS_API_KEY")
    ):
        return StubSpeechProvider()
    return HttpAvatarProvider()


class SpeechChannel:
    """One speaking slot: a new job preempts and fails the previous one."""

    def __init__(self, provider: SpeechProvider, clock: Clock) -> None:
        self.provider = provider
        self.clock = clock
        self._lock = threading.Lock()
        self._active: Optional[SpeechJob] = None
        self._handles: list[TimerHandle] = []

    def speak(self, text: str, voice_id: str = "default", on_status: StatusCallback | None = None) -> SpeechJob:
        job = SpeechJob(text=text, voice_id=voice_id)
        callback = on_status or (lambda _job, _status: None)

        def emit(target: SpeechJob, status: str) -> None:
            with self._lock:
                if target.terminal:
                    return  # exactly-once: never emit past a terminal status
                target.status = status
            callback(target, status)

        with self._lock:
            previous, handles = self._active, self._handles
            self._active, self._handles = job, []
        if previous is not None and not previous.terminal:
            for handle in handles:
                handle.cancel()
            previous.status = FAILED
            previous.error = "preempted"
            callback(previous, FAILED)

        try:
            new_handles = self.provider.start(job, self.clock, emit)
        except AvatarSessionUnavailable as exc:
            log.warning("avatar unavailable, degrading to text-only: %s", exc)
            job.degraded = True
            emit(job, QUEUED)
            new_handles = [
                clock_handle
                for clock_handle in (
                    self.clock.schedule(SPEAKING_START_DELAY_SEC, lambda: emit(job, SPEAKING)),
                    self.clock.schedule(
                        SPEAKING_START_DELAY_SEC + job.estimated_duration_sec,
                        lambda: emit(job, DONE),
                    ),
                )
            ]
        with self._lock:
            if self._active is job:
                self._handles = new_handles
        return job

    @property
    def active(self) -> Optional[SpeechJob]:
        return self._active
