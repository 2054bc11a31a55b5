"""Lecture bundle data model and storage."""

from .model import (
    MS,
    QUIZ_TYPES,
    DifficultyBank,
    ExampleAsset,
    HighlightEntry,
    LectureBundle,
    QuizItem,
    Section,
    TranscriptSegment,
    normalize_difficulty,
    validate_bank,
    validate_quiz_item,
)
from .store import load_bundle, save_bundle

__all__ = [
    "MS",
    "QUIZ_TYPES",
    "DifficultyBank",
    "ExampleAsset",
    "HighlightEntry",
    "LectureBundle",
    "QuizItem",
    "Section",
    "TranscriptSegment",
    "load_bundle",
    "normalize_difficulty",
    "save_bundle",
    "validate_bank",
    "validate_quiz_item",
]
