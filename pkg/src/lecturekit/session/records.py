"""Interaction records and the append-only session log.

Everything a learner does in a session (questions, visual requests, quiz
answers, breaks, opened examples, notes) becomes one immutable record
carrying both the video position and the wall-clock time it happened.
The log persists as JSON lines, one record per line, append-only; the
study summary is compiled from these records.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from ..errors import SchemaViolation
from ..jsonio import canonical_dumps

RECORD_KINDS = (
    "question",
    "visualRequest",
    "quizAnswer",
    "breakTaken",
    "exampleOpened",
    "note",
)


@dataclass(frozen=True)
class InteractionRecord:
    kind: str
    video_sec: float
    wall_sec: float
    selected_area: Optional[tuple[float, float, float, float]] = None
    prompt: Optional[str] = None
    response: Optional[str] = None
    extra: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in RECORD_KINDS:
            raise SchemaViolation("kind", f"unknown record kind {self.kind!r}")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "videoSec": self.video_sec,
            "wallSec": self.wall_sec,
            "selectedArea": None if self.selected_area is None else list(self.selected_area),
            "prompt": self.prompt,
            "response": self.response,
            "extra": self.extra,
        }

    @classmethod
    def from_dict(cls, raw: Any) -> "InteractionRecord":
        if not isinstance(raw, dict):
            raise SchemaViolation("record", "interaction record must be an object")
        try:
            area = raw.get("selectedArea")
            return cls(
                kind=str(raw["kind"]),
                video_sec=float(raw["videoSec"]),
                wall_sec=float(raw["wallSec"]),
                selected_area=None if area is None else tuple(float(v) for v in area),
                prompt=raw.get("prompt"),
                response=raw.get("response"),
                extra=dict(raw.get("extra") or {}),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaViolation("record", f"bad interaction record: {exc}") from None


class InteractionLog:
    """Append-only record list, optionally mirrored to a JSON-lines file.

    Opening a path that already holds records resumes from them, so a
    service restart keeps the full interaction history.
    """

    def __init__(self, path: str | Path | None = None) -> None:
        self.path = None if path is None else Path(path)
        self._records: list[InteractionRecord] = []
        if self.path is not None and self.path.exists():
            self._records.extend(InteractionLog.read(self.path)._records)

    def append(self, record: InteractionRecord) -> None:
        self._records.append(record)
        if self.path is not None:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(canonical_dumps(record.to_dict(), indent=None) + "\n")

    @property
    def records(self) -> tuple[InteractionRecord, ...]:
        return tuple(self._records)

    def __len__(self) -> int:
        return len(self._records)

    @classmethod
    def read(cls, path: str | Path) -> "InteractionLog":
        import json

        log = cls()
        text = Path(path).read_text(encoding="utf-8")
        for line in text.splitlines():
            if line.strip():
                log._records.append(InteractionRecord.from_dict(json.loads(line)))
        return log
