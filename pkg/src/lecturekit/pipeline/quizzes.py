"""Quiz bank generation across all five difficulty levels.

Each level gets its own prompt call so the model writes questions targeted
at that depth. Every returned item must pass the quiz-item contract; items
are stored under the requested level, and a reply that labels an item with
a different difficulty than requested is re-tagged rather than rejected
(the bank key, not the provider's label, is authoritative). A failure at
any level aborts the bank with the partial result attached.
"""

from __future__ import annotations

from dataclasses import replace

from ..bundle import DifficultyBank, QUIZ_TYPES, Section, validate_quiz_item
from ..errors import GatewayError, PartialQuizBank, QuizItemError
from ..gateway import Gateway

DIFFICULTY_LEVELS = (1, 2, 3, 4, 5)
DEFAULT_QUESTIONS_PER_SECTION = 3


def quiz_bindings(section: Section, level: int, questions_per_section: int) -> dict:
    """Prompt bindings for one difficulty level of one section."""
    return {
        "questionsPerSection": questions_per_section,
        "title": section.title,
        "mainConcepts": section.main_concepts,
        "keyPoints": section.key_points,
        "equations": section.equations,
        "diagrams": section.diagrams,
        "transcript": section.transcript_text(),
        "difficulty": level,
        "questionTypes": list(QUIZ_TYPES),
    }


def generate_quiz_bank(
    section: Section,
    gateway: Gateway,
    questions_per_section: int = DEFAULT_QUESTIONS_PER_SECTION,
) -> DifficultyBank:
    """Generate and validate quiz items for every difficulty level."""
    bank: DifficultyBank = {}
    for level in DIFFICULTY_LEVELS:
        if questions_per_section <= 0:
            bank[level] = []
            continue
        try:
            result = gateway.complete(
                "quizGen",
                quiz_bindings(section, level, questions_per_section),
                model_tier="reasoning",
            )
            items = [validate_quiz_item(raw) for raw in result.value["questions"]]
        except (GatewayError, QuizItemError) as exc:
            raise PartialQuizBank(level, bank, exc) from exc
        bank[level] = [
            item if item.difficulty == level else replace(item, difficulty=level)
            for item in items
        ]
    return bank
