"""Reply schemas for the structured prompt templates.

Each JSON-returning template carries a schema validated with jsonschema;
cross-field rules that a schema cannot express live in ``check_reply``.
"""

from __future__ import annotations

from typing import Any, Optional

from ..errors import SchemaMismatch

CHANGE_TYPES = ["annotation", "human_motion", "cursor", "new_slide", "transition"]

SAME_SLIDE_SCHEMA = {
    "type": "object",
    "required": ["isSameSlide", "confidence", "reason", "contentChange"],
    "properties": {
        "isSameSlide": {"type": "boolean"},
        "confidence": {"type": "number", "minimum": 0.0, "maximum": 1.0},
        "reason": {"type": "string"},
        "contentChange": {
            "type": "object",
            "required": ["type", "description"],
            "properties": {
                "type": {"enum": CHANGE_TYPES},
                "description": {"type": "string"},
            },
        },
    },
}

SLIDE_EXTRACT_SCHEMA = {
    "type": "object",
    "required": [
        "title",
        "mainTopics",
        "hasHumanPresence",
        "hasAnnotations",
        "contentFingerprint",
        "description",
    ],
    "properties": {
        "title": {"type": "string"},
        "mainTopics": {"type": "array", "items": {"type": "string"}},
        "hasHumanPresence": {"type": "boolean"},
        "hasAnnotations": {"type": "boolean"},
        "contentFingerprint": {"type": "string", "minLength": 1},
        "description": {"type": "string"},
    },
}

QUIZ_GEN_SCHEMA = {
    "type": "object",
    "required": ["questions"],
    "properties": {
        "questions": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["type", "question", "options", "correctAnswer", "explanation", "difficulty"],
                "properties": {
                    "type": {"enum": ["multiple-choice", "true-false", "fill-blank"]},
                    "question": {"type": "string"},
                    "options": {"type": "array", "items": {"type": "string"}},
                    "correctAnswer": {"type": "string"},
                    "explanation": {"type": "string"},
                    "difficulty": {"type": ["string", "number"]},
                },
            },
        }
    },
}

HIGHLIGHT_GEN_SCHEMA = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["box_2d", "relavant_transcript"],
        "properties": {
            "box_2d": {
                "type": "array",
                "minItems": 4,
                "maxItems": 4,
                "items": {"type": "number"},
            },
            "relavant_transcript": {"type": "string"},
        },
    },
}

VISUAL_KEYWORDS_SCHEMA = {
    "type": "object",
    "required": ["keywords"],
    "properties": {"keywords": {"type": "string"}},
}

REPLY_SCHEMAS: dict[str, Optional[dict]] = {
    "sameSlide": SAME_SLIDE_SCHEMA,
    "slideExtract": SLIDE_EXTRACT_SCHEMA,
    "quizGen": QUIZ_GEN_SCHEMA,
    "highlightGen": HIGHLIGHT_GEN_SCHEMA,
    "visualKeywords": VISUAL_KEYWORDS_SCHEMA,
    "clarify": None,
    "breakStory": None,
}


def check_reply(template_id: str, value: Any) -> None:
    """Cross-field rules applied after schema validation."""
    if template_id == "sameSlide":
        change = value["contentChange"]["type"]
        if change == "new_slide" and value["isSameSlide"]:
            raise SchemaMismatch(
                "contentChange.type", "new_slide change reported for a same-slide verdict"
            )
