"""Slide content extraction from a section's key frame.

The vision model reads the frame and reports the durable slide content:
title, topics, a prose description, presence flags for humans and ink
annotations, and a content fingerprint that stays stable across cursor
movement or presenter motion on the same slide.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from ..gateway import Gateway


@dataclass(frozen=True)
class SlideExtract:
    """Durable content of one slide as reported by the vision model."""

    title: str
    main_topics: tuple[str, ...]
    has_human_presence: bool
    has_annotations: bool
    content_fingerprint: str
    description: str

    def to_json(self) -> dict:
        return {
            "title": self.title,
            "mainTopics": list(self.main_topics),
            "hasHumanPresence": self.has_human_presence,
            "hasAnnotations": self.has_annotations,
            "contentFingerprint": self.content_fingerprint,
            "description": self.description,
        }


def extract_slide(key_frame_ref: str | Path, gateway: Gateway) -> SlideExtract:
    """Run the slide-content prompt against one key frame."""
    result = gateway.complete(
        "slideExtract",
        {},
        attachments=(Path(key_frame_ref),),
        model_tier="fast",
    )
    value = result.value
    return SlideExtract(
        title=str(value["title"]),
        main_topics=tuple(str(t) for t in value["mainTopics"]),
        has_human_presence=bool(value["hasHumanPresence"]),
        has_annotations=bool(value["hasAnnotations"]),
        content_fingerprint=str(value["contentFingerprint"]),
        description=str(value["description"]),
    )


def key_point_sentences(description: str) -> list[str]:
    """Split an extract description into key-point sentences."""
    points = []
    for chunk in description.replace("!", ".").replace("?", ".").split("."):
        chunk = chunk.strip()
        if chunk:
            points.append(chunk)
    return points
