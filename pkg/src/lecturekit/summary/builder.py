"""Study-summary compiler: interaction log -> infinite-canvas document.

Pure function over an immutable log snapshot. Sections become fixed-width
columns ordered by section index; each interaction record becomes exactly
one card, stacked in its section's column by record timestamp with a fixed
gutter. The layout is fully deterministic: identical logs serialize to
byte-identical documents.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from ..bundle import LectureBundle
from ..errors import OrphanRecord
from ..jsonio import canonical_dumps
from ..session.records import InteractionRecord

COLUMN_WIDTH = 480  # canvas units
CARD_GUTTER = 16
MIN_CARD_HEIGHT = 96

_CHARS_PER_LINE = 56
_LINE_HEIGHT = 24
_CARD_PADDING = 48


@dataclass(frozen=True)
class CanvasCard:
    record_ref: int  # index into the session log
    x: int
    y: int
    w: int
    h: int
    kind: str
    replay_text: Optional[str]

    def to_json(self) -> dict:
        return {
            "recordRef": self.record_ref,
            "x": self.x,
            "y": self.y,
            "w": self.w,
            "h": self.h,
            "kind": self.kind,
            "replayText": self.replay_text,
        }


@dataclass(frozen=True)
class SectionSummary:
    section_id: str
    title: str
    column_index: int
    x: int
    card_count: int

    def to_json(self) -> dict:
        return {
            "sectionId": self.section_id,
            "title": self.title,
            "columnIndex": self.column_index,
            "x": self.x,
            "width": COLUMN_WIDTH,
            "cardCount": self.card_count,
        }


@dataclass(frozen=True)
class SummaryDocument:
    session_id: str
    sections: tuple[SectionSummary, ...]
    canvas: tuple[CanvasCard, ...]

    def to_json(self) -> dict:
        return {
            "sessionId": self.session_id,
            "sections": [s.to_json() for s in self.sections],
            "canvas": [c.to_json() for c in self.canvas],
        }

    def dumps(self) -> str:
        return canonical_dumps(self.to_json()) + "\n"


def card_height(replay_text: Optional[str]) -> int:
    """Deterministic height from the replayable text length."""
    length = len(replay_text) if replay_text else 0
    lines = max(1, -(-length // _CHARS_PER_LINE))
    return max(MIN_CARD_HEIGHT, _CARD_PADDING + _LINE_HEIGHT * lines)


def _section_index_for(
    record: InteractionRecord, bundle: LectureBundle, index_by_id: dict[str, int]
) -> int:
    explicit = record.extra.get("sectionId")
    if explicit is not None:
        if explicit not in index_by_id:
            raise OrphanRecord(str(explicit))
        return index_by_id[explicit]
    section = bundle.section_at(record.video_sec)
    if section is None:
        raise OrphanRecord(f"@{record.video_sec}s")
    return index_by_id[section.id]


def compile_summary(
    log: Sequence[InteractionRecord],
    bundle: LectureBundle,
    *,
    session_id: str = "",
) -> SummaryDocument:
    """Lay every record out as one card in its section's column."""
    index_by_id = {section.id: i for i, section in enumerate(bundle.sections)}

    placed: dict[int, list[tuple[float, int]]] = {i: [] for i in index_by_id.values()}
    for ref, record in enumerate(log):
        column = _section_index_for(record, bundle, index_by_id)
        placed[column].append((record.wall_sec, ref))

    cards: list[CanvasCard] = []
    counts: dict[int, int] = {}
    for column, members in placed.items():
        members.sort()  # timestamp order, log order as tie-break
        counts[column] = len(members)
        x = column * (COLUMN_WIDTH + CARD_GUTTER)
        y = 0
        for _wall, ref in members:
            record = log[ref]
            replay_text = record.response or record.prompt or None
            h = card_height(replay_text)
            cards.append(
                CanvasCard(
                    record_ref=ref,
                    x=x,
                    y=y,
                    w=COLUMN_WIDTH,
                    h=h,
                    kind=record.kind,
                    replay_text=replay_text,
                )
            )
            y += h + CARD_GUTTER

    cards.sort(key=lambda c: c.record_ref)
    sections = tuple(
        SectionSummary(
            section_id=section.id,
            title=section.title,
            column_index=i,
            x=i * (COLUMN_WIDTH + CARD_GUTTER),
            card_count=counts.get(i, 0),
        )
        for i, section in enumerate(bundle.sections)
    )
    return SummaryDocument(session_id=session_id, sections=sections, canvas=tuple(cards))
