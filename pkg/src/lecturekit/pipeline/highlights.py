"""Highlight timeline generation for a section.

The vision model returns content boxes on a fixed 1000x1000 reference
grid, each tied to the transcript text it illustrates. Boxes are
normalized into the unit square. The model returns text, not timestamps,
so each entry is aligned to the transcript by fuzzy token matching: the
segment with the highest normalized token overlap (intersection over the
smaller token set) wins, provided it clears the match threshold. Entries
with empty or unmatched text stay on screen without an active time range.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Optional, Sequence

from ..bundle import HighlightEntry, Section, TranscriptSegment
from ..gateway import Gateway

TOKEN_OVERLAP_THRESHOLD = 0.6
REFERENCE_RESOLUTION = (1000, 1000)

_WORD = re.compile(r"[a-z0-9]+")


def _tokens(text: str) -> set[str]:
    return set(_WORD.findall(text.lower()))


def token_overlap(a: str, b: str) -> float:
    """Normalized token overlap: shared tokens over the smaller token set."""
    ta, tb = _tokens(a), _tokens(b)
    if not ta or not tb:
        return 0.0
    return len(ta & tb) / min(len(ta), len(tb))


def match_segment(
    text: str, segments: Sequence[TranscriptSegment]
) -> Optional[TranscriptSegment]:
    """Best-matching transcript segment for a reply text, or None."""
    best: Optional[TranscriptSegment] = None
    best_score = 0.0
    for segment in segments:
        score = token_overlap(text, segment.text)
        if score > best_score:
            best, best_score = segment, score
    if best_score >= TOKEN_OVERLAP_THRESHOLD:
        return best
    return None


def normalize_box(
    raw: Sequence[float], reference: tuple[int, int] = REFERENCE_RESOLUTION
) -> Optional[tuple[float, float, float, float]]:
    """Scale a reference-grid box into the unit square; None if degenerate."""
    ref_w, ref_h = reference
    x0, y0, x1, y1 = (float(v) for v in raw)
    x0, x1 = sorted((x0 / ref_w, x1 / ref_w))
    y0, y1 = sorted((y0 / ref_h, y1 / ref_h))
    x0, y0 = max(0.0, x0), max(0.0, y0)
    x1, y1 = min(1.0, x1), min(1.0, y1)
    if x0 >= x1 or y0 >= y1:
        return None
    return (x0, y0, x1, y1)


def generate_highlights(
    section: Section,
    gateway: Gateway,
    key_frame_ref: str | Path | None = None,
) -> list[HighlightEntry]:
    """Produce the aligned highlight timeline for one section."""
    ref = Path(key_frame_ref) if key_frame_ref is not None else Path(section.slide_image_ref)
    result = gateway.complete(
        "highlightGen",
        {"slideTranscript": section.transcript_text()},
        attachments=(ref,),
        model_tier="fast",
    )
    entries: list[HighlightEntry] = []
    for raw in result.value:
        box = normalize_box(raw["box_2d"], section.reference_resolution)
        if box is None:
            continue
        text = str(raw["relavant_transcript"]).strip()
        segment = match_segment(text, section.transcript) if text else None
        if segment is None:
            entries.append(HighlightEntry(box=box, relevant_transcript=text))
        else:
            entries.append(
                HighlightEntry(
                    box=box,
                    relevant_transcript=text,
                    start_sec=max(segment.start_sec, section.start_sec),
                    end_sec=min(segment.end_sec, section.end_sec),
                )
            )
    return entries
