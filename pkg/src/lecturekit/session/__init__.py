"""Interactive session engine: modes, transitions, interaction log."""

from .engine import (
    ANALOGY_TRIGGERS,
    APOLOGY_TEXT,
    BREAK_CHOICES,
    CLARIFYING,
    CLARIFY_WORD_LIMIT,
    DEFAULT_QUESTION,
    EVENT_KINDS,
    EXAMPLE_ACTIVE,
    LectureSession,
    MODES,
    ON_BREAK,
    PLAYING,
    QUIZ_ACTIVE,
    STEP_TRIGGER,
    SUMMARY_VIEW,
    TRANSITIONS,
    VISUAL_SHOWN,
)
from .records import RECORD_KINDS, InteractionLog, InteractionRecord

__all__ = [
    "ANALOGY_TRIGGERS",
    "APOLOGY_TEXT",
    "BREAK_CHOICES",
    "CLARIFYING",
    "CLARIFY_WORD_LIMIT",
    "DEFAULT_QUESTION",
    "EVENT_KINDS",
    "EXAMPLE_ACTIVE",
    "InteractionLog",
    "InteractionRecord",
    "LectureSession",
    "MODES",
    "ON_BREAK",
    "PLAYING",
    "QUIZ_ACTIVE",
    "RECORD_KINDS",
    "STEP_TRIGGER",
    "SUMMARY_VIEW",
    "TRANSITIONS",
    "VISUAL_SHOWN",
]
