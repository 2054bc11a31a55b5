"""HTTP service, server-sent event stream, and command-line interface."""

from __future__ import annotations

from .app import create_app
from .events import EVENT_KINDS, EventBuffer, SessionEvent

__all__ = [
    "EVENT_KINDS",
    "EventBuffer",
    "SessionEvent",
    "create_app",
]
