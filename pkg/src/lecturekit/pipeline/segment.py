"""Two-tier section segmentation over sampled frames.

Cheap perceptual hashing handles the easy cases: consecutive frames whose
hashes differ by at most the threshold are the same slide, full stop.
Only pairs above the threshold are escalated to the vision model, which
distinguishes real slide changes from cursor movement and ink annotations.
A section boundary is opened exactly where the model reports a new slide.

Sections shorter than the minimum duration are merged into their
predecessor (the first section, having none, merges into its successor).
The key frame of a section is its last sampled frame, which carries the
slide in its most complete state.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..gateway import Gateway
from ..imaging import hamming
from .frames import FrameSample

HASH_ESCALATION_THRESHOLD = 10
MIN_SECTION_SEC = 5.0


@dataclass(frozen=True)
class SectionSpan:
    """A run of samples showing one slide, with its covering time span."""

    start_sec: float
    end_sec: float
    samples: tuple[FrameSample, ...]

    @property
    def key_frame(self) -> FrameSample:
        return self.samples[-1]


def is_new_slide(a: FrameSample, b: FrameSample, gateway: Gateway, hash_threshold: int) -> bool:
    """Decide whether ``b`` starts a new slide relative to ``a``."""
    if hamming(a.perceptual_hash, b.perceptual_hash) <= hash_threshold:
        return False
    result = gateway.complete(
        "sameSlide",
        {},
        attachments=(a.image_ref, b.image_ref),
        model_tier="fast",
    )
    return not bool(result.value["isSameSlide"])


def _merge_short(spans: list[SectionSpan], min_section_sec: float) -> list[SectionSpan]:
    spans = list(spans)
    changed = True
    while changed and len(spans) > 1:
        changed = False
        for i, span in enumerate(spans):
            if span.end_sec - span.start_sec >= min_section_sec:
                continue
            if i > 0:
                prev = spans[i - 1]
                spans[i - 1 : i + 1] = [
                    SectionSpan(prev.start_sec, span.end_sec, prev.samples + span.samples)
                ]
            else:
                nxt = spans[1]
                spans[0:2] = [
                    SectionSpan(span.start_sec, nxt.end_sec, span.samples + nxt.samples)
                ]
            changed = True
            break
    return spans


def segment_sections(
    samples: list[FrameSample],
    gateway: Gateway,
    *,
    duration_sec: float,
    hash_threshold: int = HASH_ESCALATION_THRESHOLD,
    min_section_sec: float = MIN_SECTION_SEC,
) -> list[SectionSpan]:
    """Group sampled frames into slide sections covering ``[0, duration]``."""
    if not samples:
        raise ValueError("cannot segment an empty sample list")
    groups: list[list[FrameSample]] = [[samples[0]]]
    for a, b in zip(samples, samples[1:]):
        if is_new_slide(a, b, gateway, hash_threshold):
            groups.append([b])
        else:
            groups[-1].append(b)

    spans: list[SectionSpan] = []
    for k, group in enumerate(groups):
        start = 0.0 if k == 0 else group[0].timestamp_sec
        end = duration_sec if k == len(groups) - 1 else groups[k + 1][0].timestamp_sec
        spans.append(SectionSpan(start, end, tuple(group)))
    return _merge_short(spans, min_section_sec)
