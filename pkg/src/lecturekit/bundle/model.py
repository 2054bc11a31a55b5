"""Data model for lecture bundles.

A bundle is the preprocessed unit the rest of the system works from: an
ordered list of sections (one per logical slide) carrying slide imagery,
extracted content, transcript alignment, quiz banks and highlight
timelines, plus registered interactive example assets.

All timestamps are float seconds; comparisons tolerate 1 ms. Rectangles are
normalized ``[x0, y0, x1, y1]`` in slide coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from ..errors import (
    AnswerNotInOptions,
    BadEnum,
    InvalidOptions,
    MissingField,
    SchemaViolation,
)

MS = 1e-3  # timestamp tolerance in seconds

QUIZ_TYPES = ("multiple-choice", "true-false", "fill-blank")

# Accepted spellings for the difficulty field of a raw quiz item.
DIFFICULTY_NAMES = {
    "very easy": 1,
    "easy": 2,
    "medium": 3,
    "hard": 4,
    "very hard": 5,
}


def _require(raw: dict, key: str) -> Any:
    if key not in raw or raw[key] is None:
        raise MissingField(key)
    return raw[key]


@dataclass(frozen=True)
class TranscriptSegment:
    start_sec: float
    end_sec: float
    text: str

    def validate(self, where: str) -> None:
        if self.start_sec > self.end_sec + MS:
            raise SchemaViolation(where, "segment startSec exceeds endSec")
        if not self.text.strip():
            raise SchemaViolation(where, "segment text is empty")

    def to_dict(self) -> dict:
        return {"startSec": self.start_sec, "endSec": self.end_sec, "text": self.text}

    @classmethod
    def from_dict(cls, raw: Any, where: str) -> "TranscriptSegment":
        if not isinstance(raw, dict):
            raise SchemaViolation(where, "transcript segment must be an object")
        try:
            seg = cls(
                start_sec=float(raw["startSec"]),
                end_sec=float(raw["endSec"]),
                text=str(raw["text"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaViolation(where, f"bad transcript segment: {exc}") from None
        seg.validate(where)
        return seg


@dataclass(frozen=True)
class QuizItem:
    type: str
    question: str
    options: tuple[str, ...]
    correct_answer: str
    explanation: str
    difficulty: int
    answer_synonyms: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        out = {
            "type": self.type,
            "question": self.question,
            "options": list(self.options),
            "correctAnswer": self.correct_answer,
            "explanation": self.explanation,
            "difficulty": self.difficulty,
        }
        if self.answer_synonyms:
            out["answerSynonyms"] = list(self.answer_synonyms)
        return out


def normalize_difficulty(value: Any) -> int:
    """Map a raw difficulty (1-5 number, numeric string or level name) to 1-5."""
    if isinstance(value, bool):
        raise BadEnum("difficulty", value)
    if isinstance(value, (int, float)):
        level = int(value)
        if level != value or not 1 <= level <= 5:
            raise BadEnum("difficulty", value)
        return level
    if isinstance(value, str):
        text = value.strip().lower()
        if text in DIFFICULTY_NAMES:
            return DIFFICULTY_NAMES[text]
        if text.isdigit() and 1 <= int(text) <= 5:
            return int(text)
    raise BadEnum("difficulty", value)


def validate_quiz_item(raw: Any) -> QuizItem:
    """Normalize a provider-produced quiz item, enforcing the reply contract.

    Multiple-choice items must carry exactly four options including the
    correct answer; true-false and fill-blank items must carry an empty
    options list (the field itself is always required).
    """
    if not isinstance(raw, dict):
        raise MissingField("type")
    qtype = _require(raw, "type")
    if qtype not in QUIZ_TYPES:
        raise BadEnum("type", qtype)
    question = str(_require(raw, "question"))
    if "options" not in raw:
        raise MissingField("options")
    options = raw["options"]
    if not isinstance(options, list) or not all(isinstance(o, str) for o in options):
        raise InvalidOptions("options must be a list of strings")
    answer = str(_require(raw, "correctAnswer"))
    explanation = str(_require(raw, "explanation"))
    difficulty = normalize_difficulty(_require(raw, "difficulty"))

    if qtype == "multiple-choice":
        if len(options) != 4:
            raise InvalidOptions(f"multiple-choice needs exactly 4 options, got {len(options)}")
        if answer not in options:
            raise AnswerNotInOptions(answer, options)
    else:
        if options:
            raise InvalidOptions(f"{qtype} items must use an empty options list")
        if qtype == "true-false":
            normalized = answer.strip().lower()
            if normalized not in ("true", "false"):
                raise BadEnum("correctAnswer", answer)
            answer = "True" if normalized == "true" else "False"

    synonyms = raw.get("answerSynonyms") or []
    if not isinstance(synonyms, list) or not all(isinstance(s, str) for s in synonyms):
        raise InvalidOptions("answerSynonyms must be a list of strings")

    return QuizItem(
        type=qtype,
        question=question,
        options=tuple(options),
        correct_answer=answer,
        explanation=explanation,
        difficulty=difficulty,
        answer_synonyms=tuple(synonyms),
    )


DifficultyBank = dict[int, list[QuizItem]]


def validate_bank(bank: DifficultyBank, where: str) -> None:
    for level, items in bank.items():
        if not isinstance(level, int) or not 1 <= level <= 5:
            raise SchemaViolation(where, f"bank level {level!r} outside 1..5")
        for item in items:
            if item.difficulty != level:
                raise SchemaViolation(
                    where, f"item difficulty {item.difficulty} stored under level {level}"
                )


@dataclass(frozen=True)
class HighlightEntry:
    box: tuple[float, float, float, float]
    relevant_transcript: str
    start_sec: Optional[float] = None
    end_sec: Optional[float] = None

    @property
    def active(self) -> bool:
        return self.start_sec is not None and self.end_sec is not None

    def covers(self, t_sec: float) -> bool:
        return self.active and self.start_sec - MS <= t_sec <= self.end_sec + MS

    def validate(self, where: str, section_start: float, section_end: float) -> None:
        x0, y0, x1, y1 = self.box
        if not (0 <= x0 < x1 <= 1 and 0 <= y0 < y1 <= 1):
            raise SchemaViolation(where, f"box {self.box} not a normalized rectangle")
        if (self.start_sec is None) != (self.end_sec is None):
            raise SchemaViolation(where, "highlight has a half-open time range")
        if not self.relevant_transcript and self.active:
            raise SchemaViolation(where, "highlight with empty transcript must not carry a range")
        if self.active:
            if self.start_sec > self.end_sec + MS:
                raise SchemaViolation(where, "highlight startSec exceeds endSec")
            if self.start_sec < section_start - MS or self.end_sec > section_end + MS:
                raise SchemaViolation(where, "highlight range outside owning section")

    def to_dict(self) -> dict:
        return {
            "box": list(self.box),
            "relevantTranscript": self.relevant_transcript,
            "startSec": self.start_sec,
            "endSec": self.end_sec,
        }

    @classmethod
    def from_dict(cls, raw: Any, where: str) -> "HighlightEntry":
        if not isinstance(raw, dict):
            raise SchemaViolation(where, "highlight entry must be an object")
        try:
            box = raw["box"]
            entry = cls(
                box=(float(box[0]), float(box[1]), float(box[2]), float(box[3])),
                relevant_transcript=str(raw.get("relevantTranscript", "")),
                start_sec=None if raw.get("startSec") is None else float(raw["startSec"]),
                end_sec=None if raw.get("endSec") is None else float(raw["endSec"]),
            )
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise SchemaViolation(where, f"bad highlight entry: {exc}") from None
        return entry


@dataclass(frozen=True)
class ExampleAsset:
    section_id: str
    trigger_sec: float
    html_ref: str
    title: str

    def to_dict(self) -> dict:
        return {
            "sectionId": self.section_id,
            "triggerSec": self.trigger_sec,
            "htmlRef": self.html_ref,
            "title": self.title,
        }

    @classmethod
    def from_dict(cls, raw: Any, where: str) -> "ExampleAsset":
        if not isinstance(raw, dict):
            raise SchemaViolation(where, "example asset must be an object")
        try:
            return cls(
                section_id=str(raw["sectionId"]),
                trigger_sec=float(raw["triggerSec"]),
                html_ref=str(raw["htmlRef"]),
                title=str(raw.get("title", "")),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaViolation(where, f"bad example asset: {exc}") from None


@dataclass
class Section:
    id: str
    start_sec: float
    end_sec: float
    slide_image_ref: str
    title: str
    main_concepts: list[str] = field(default_factory=list)
    key_points: list[str] = field(default_factory=list)
    equations: Optional[list[str]] = None
    diagrams: Optional[list[str]] = None
    content_fingerprint: str = ""
    transcript: list[TranscriptSegment] = field(default_factory=list)
    quizzes: DifficultyBank = field(default_factory=dict)
    highlights: list[HighlightEntry] = field(default_factory=list)
    reference_resolution: tuple[int, int] = (1000, 1000)

    def validate(self, where: str) -> None:
        if self.start_sec >= self.end_sec - MS:
            raise SchemaViolation(where, "startSec must precede endSec")
        if not self.content_fingerprint:
            raise SchemaViolation(where, "contentFingerprint is empty")
        prev_start = None
        for i, seg in enumerate(self.transcript):
            seg.validate(f"{where}.transcript[{i}]")
            if prev_start is not None and seg.start_sec < prev_start - MS:
                raise SchemaViolation(f"{where}.transcript", "segments not sorted by start time")
            prev_start = seg.start_sec
            if seg.start_sec < self.start_sec - MS or seg.end_sec > self.end_sec + MS:
                raise SchemaViolation(
                    f"{where}.transcript[{i}]", "segment outside section time range"
                )
        validate_bank(self.quizzes, f"{where}.quizzes")
        for i, entry in enumerate(self.highlights):
            entry.validate(f"{where}.highlights[{i}]", self.start_sec, self.end_sec)

    def transcript_text(self) -> str:
        return " ".join(seg.text for seg in self.transcript)

    def content_text(self) -> str:
        """Plain-text rendering of the slide content, used as prompt context."""
        parts = [self.title]
        if self.main_concepts:
            parts.append("Main concepts: " + ", ".join(self.main_concepts))
        if self.key_points:
            parts.append("Key points: " + ", ".join(self.key_points))
        if self.equations:
            parts.append("Equations: " + ", ".join(self.equations))
        if self.diagrams:
            parts.append("Diagrams: " + ", ".join(self.diagrams))
        return ". ".join(parts)


@dataclass
class LectureBundle:
    id: str
    title: str
    video_ref: str
    duration_sec: float
    sections: list[Section] = field(default_factory=list)
    examples: list[ExampleAsset] = field(default_factory=list)
    created_at: str = ""
    root: Optional[Path] = field(default=None, compare=False, repr=False)

    def resolve(self, ref: str) -> Path:
        """Resolve a bundle-relative file reference against the bundle root."""
        path = Path(ref)
        if path.is_absolute() or self.root is None:
            return path
        return self.root / path

    def section_by_id(self, section_id: str) -> Optional[Section]:
        for section in self.sections:
            if section.id == section_id:
                return section
        return None

    def section_at(self, t_sec: float) -> Optional[Section]:
        """Section whose time range contains ``t_sec`` (last one at the very end)."""
        for section in self.sections:
            if section.start_sec - MS <= t_sec < section.end_sec - MS:
                return section
        if self.sections and t_sec >= self.sections[-1].start_sec - MS:
            return self.sections[-1]
        return None

    def summary_text(self) -> str:
        """One-line lecture summary assembled from section content."""
        parts = []
        for section in self.sections:
            if section.main_concepts:
                parts.append(f"{section.title}: {', '.join(section.main_concepts)}")
            else:
                parts.append(section.title)
        return "; ".join(parts)

    def validate(self, check_files: bool = True) -> None:
        """Check every bundle invariant; raises a typed error on the first hit."""
        from ..errors import DanglingReference

        if self.duration_sec < 0:
            raise SchemaViolation("durationSec", "must be >= 0")
        seen_ids = set()
        for i, section in enumerate(self.sections):
            where = f"sections[{i}]"
            if section.id in seen_ids:
                raise SchemaViolation(where, f"duplicate section id {section.id!r}")
            seen_ids.add(section.id)
            section.validate(where)

        ordered = sorted(self.sections, key=lambda s: s.start_sec)
        if [s.id for s in ordered] != [s.id for s in self.sections]:
            raise SchemaViolation("sections", "not sorted by start time")
        for prev, nxt in zip(self.sections, self.sections[1:]):
            if nxt.start_sec < prev.end_sec - MS:
                raise SchemaViolation("sections", f"overlap between {prev.id} and {nxt.id}")
            if nxt.start_sec > prev.end_sec + MS:
                raise SchemaViolation("sections", f"gap between {prev.id} and {nxt.id}")
        if self.sections:
            if abs(self.sections[0].start_sec) > MS:
                raise SchemaViolation("sections", "first section does not start at 0")
            if abs(self.sections[-1].end_sec - self.duration_sec) > MS:
                raise SchemaViolation("sections", "sections do not cover the full duration")

        for i, asset in enumerate(self.examples):
            where = f"examples[{i}]"
            owner = self.section_by_id(asset.section_id)
            if owner is None:
                raise SchemaViolation(where, f"unknown sectionId {asset.section_id!r}")
            if not (owner.start_sec - MS <= asset.trigger_sec <= owner.end_sec + MS):
                raise SchemaViolation(where, "triggerSec outside owning section")

        if check_files:
            for section in self.sections:
                path = self.resolve(section.slide_image_ref)
                if not path.is_file():
                    raise DanglingReference(str(path))
            for asset in self.examples:
                path = self.resolve(asset.html_ref)
                if not path.is_file():
                    raise DanglingReference(str(path))
