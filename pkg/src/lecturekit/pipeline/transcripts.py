"""Transcript ingestion for SRT and WebVTT caption files.

Both formats are cue-based: a time range ``start --> end`` followed by one
or more text lines.  The parser is deliberately tolerant about the small
differences between the two (comma vs dot millisecond separators, optional
hour fields, cue identifiers, WEBVTT header blocks) and strips inline
markup tags so downstream consumers only ever see plain text.
"""

from __future__ import annotations

import re
from pathlib import Path

from ..bundle import TranscriptSegment
from ..errors import TranscriptError

# 1:02:03.456 / 02:03,456 / 02:03.456 with optional hours.
_TS = re.compile(
    r"(?:(\d{1,3}):)?(\d{1,2}):(\d{1,2})[.,](\d{1,3})"
)
_CUE_LINE = re.compile(
    r"^\s*((?:\d{1,3}:)?\d{1,2}:\d{1,2}[.,]\d{1,3})\s*-->\s*"
    r"((?:\d{1,3}:)?\d{1,2}:\d{1,2}[.,]\d{1,3})"
)
_TAG = re.compile(r"<[^>]*>")


def parse_timestamp(text: str) -> float:
    """Return seconds for an ``HH:MM:SS.mmm`` style timestamp."""
    match = _TS.fullmatch(text.strip())
    if match is None:
        raise ValueError(f"bad timestamp: {text!r}")
    hours = int(match.group(1) or 0)
    minutes = int(match.group(2))
    seconds = int(match.group(3))
    millis = int(match.group(4).ljust(3, "0"))
    return hours * 3600.0 + minutes * 60.0 + seconds + millis / 1000.0


def _clean_text(lines: list[str]) -> str:
    text = " ".join(_TAG.sub("", line).strip() for line in lines)
    return " ".join(text.split())


def parse_transcript(text: str, *, ref: str = "<string>") -> list[TranscriptSegment]:
    """Parse SRT or WebVTT content into ordered transcript segments.

    Cue identifiers, the ``WEBVTT`` header, ``NOTE``/``STYLE`` blocks and
    inline tags are discarded.  Cues with empty text are dropped.
    """
    segments: list[TranscriptSegment] = []
    lines = text.replace("﻿", "").splitlines()
    i = 0
    saw_cue = False
    while i < len(lines):
        line = lines[i]
        match = _CUE_LINE.match(line)
        if match is None:
            i += 1
            continue
        saw_cue = True
        start = parse_timestamp(match.group(1))
        end = parse_timestamp(match.group(2))
        i += 1
        body: list[str] = []
        while i < len(lines) and lines[i].strip():
            body.append(lines[i])
            i += 1
        content = _clean_text(body)
        if end <= start:
            raise TranscriptError(ref, f"cue ends at or before its start ({start} --> {end})")
        if content:
            segments.append(TranscriptSegment(start_sec=start, end_sec=end, text=content))
    if not saw_cue:
        raise TranscriptError(ref, "no caption cues found")
    segments.sort(key=lambda seg: (seg.start_sec, seg.end_sec))
    return segments


def load_transcript(path: str | Path) -> list[TranscriptSegment]:
    """Read and parse an ``.srt`` or ``.vtt`` file."""
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise TranscriptError(str(path), "file not found") from None
    except OSError as exc:
        raise TranscriptError(str(path), str(exc)) from exc
    except UnicodeDecodeError as exc:
        raise TranscriptError(str(path), f"not UTF-8 text: {exc}") from exc
    return parse_transcript(raw, ref=str(path))
