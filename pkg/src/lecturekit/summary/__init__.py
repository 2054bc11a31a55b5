"""Session-log to study-summary compilation."""

from .builder import (
    CARD_GUTTER,
    COLUMN_WIDTH,
    CanvasCard,
    MIN_CARD_HEIGHT,
    SectionSummary,
    SummaryDocument,
    card_height,
    compile_summary,
)

__all__ = [
    "CARD_GUTTER",
    "COLUMN_WIDTH",
    "CanvasCard",
    "MIN_CARD_HEIGHT",
    "SectionSummary",
    "SummaryDocument",
    "card_height",
    "compile_summary",
]
