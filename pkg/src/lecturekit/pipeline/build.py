"""End-to-end preprocessing: video + transcript (+ examples) to bundle.

Stages run in a fixed order and every failure is re-raised annotated with
the stage that produced it, so callers can tell a transcript problem from
a segmentation problem without parsing messages. The output directory
receives a complete on-disk bundle that round-trips through load_bundle.

Interactive example assets are registered from a directory either via an
``examples.json`` manifest (entries with ``file``, ``triggerSec`` and an
optional ``title``) or by the ``NAME@SECONDS.html`` file naming
convention; each asset attaches to the section covering its trigger time.
"""

from __future__ import annotations

import re
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..bundle import LectureBundle, ExampleAsset, Section, TranscriptSegment, save_bundle
from ..errors import StageError
from ..gateway import Gateway
from ..jsonio import read_json
from .extract import extract_slide, key_point_sentences
from .frames import FrameExtractor, OpenCVFrameExtractor, sample_frames
from .highlights import generate_highlights
from .quizzes import DEFAULT_QUESTIONS_PER_SECTION, generate_quiz_bank
from .segment import (
    HASH_ESCALATION_THRESHOLD,
    MIN_SECTION_SEC,
    SectionSpan,
    segment_sections,
)
from .transcripts import load_transcript

_EXAMPLE_NAME = re.compile(r"^(?P<name>.+)@(?P<sec>\d+(?:\.\d+)?)\.html$")


@dataclass
class PipelineConfig:
    """Tunables for one preprocessing run."""

    interval_sec: float = 2.0
    min_section_sec: float = MIN_SECTION_SEC
    hash_threshold: int = HASH_ESCALATION_THRESHOLD
    questions_per_section: int = DEFAULT_QUESTIONS_PER_SECTION
    bundle_id: Optional[str] = None
    title: Optional[str] = None
    created_at: str = ""
    extractor: FrameExtractor = field(default_factory=OpenCVFrameExtractor)


def _run_stage(stage: str, fn):
    try:
        return fn()
    except StageError:
        raise
    except Exception as exc:
        raise StageError(stage, exc) from exc


def _slug(text: str) -> str:
    slug = re.sub(r"[^a-z0-9]+", "-", text.lower()).strip("-")
    return slug or "lecture"


def _span_index_at(spans: list[SectionSpan], t_sec: float) -> int:
    for i, span in enumerate(spans):
        if span.start_sec <= t_sec < span.end_sec:
            return i
    return len(spans) - 1


def _partition_transcript(
    segments: list[TranscriptSegment], sections: list[Section]
) -> None:
    """Assign each segment to the section containing its midpoint.

    Segment times are clipped to the owning section so a cue straddling a
    slide change never leaks outside its section's range.
    """
    for seg in segments:
        mid = (seg.start_sec + seg.end_sec) / 2.0
        owner = sections[-1]
        for section in sections:
            if section.start_sec <= mid < section.end_sec:
                owner = section
                break
        owner.transcript.append(
            TranscriptSegment(
                start_sec=max(seg.start_sec, owner.start_sec),
                end_sec=min(seg.end_sec, owner.end_sec),
                text=seg.text,
            )
        )


def _collect_examples(examples_dir: Path, spans: list[SectionSpan], section_ids: list[str]) -> list[ExampleAsset]:
    manifest_path = examples_dir / "examples.json"
    entries: list[tuple[Path, float, str]] = []
    if manifest_path.is_file():
        raw = read_json(manifest_path)
        if not isinstance(raw, list):
            raise ValueError("examples.json must hold a list")
        for item in raw:
            path = examples_dir / str(item["file"])
            if not path.is_file():
                raise FileNotFoundError(f"example asset {path} not found")
            title = str(item.get("title", path.stem))
            entries.append((path, float(item["triggerSec"]), title))
    else:
        for path in sorted(examples_dir.glob("*.html")):
            match = _EXAMPLE_NAME.match(path.name)
            if match is None:
                raise ValueError(
                    f"example file {path.name!r} does not follow NAME@SECONDS.html "
                    "and no examples.json manifest is present"
                )
            entries.append((path, float(match.group("sec")), match.group("name")))

    assets = []
    for path, trigger, title in entries:
        if not 0 <= trigger <= spans[-1].end_sec:
            raise ValueError(f"example trigger {trigger}s outside the video")
        owner = section_ids[_span_index_at(spans, trigger)]
        assets.append(
            ExampleAsset(
                section_id=owner,
                trigger_sec=trigger,
                html_ref=str(path),
                title=title,
            )
        )
    return assets


def build_bundle(
    video_ref: str | Path,
    transcript_ref: str | Path,
    examples_dir: str | Path | None,
    gateway: Gateway,
    out_dir: str | Path,
    config: PipelineConfig | None = None,
) -> LectureBundle:
    """Run the whole preprocessing pipeline and persist the bundle."""
    config = config or PipelineConfig()
    video_ref = Path(video_ref)
    out_dir = Path(out_dir)

    segments = _run_stage("transcript-ingest", lambda: load_transcript(transcript_ref))

    with tempfile.TemporaryDirectory(prefix="lecturekit-frames-") as tmp:
        samples = _run_stage(
            "frame-sampling",
            lambda: sample_frames(video_ref, config.interval_sec, tmp, config.extractor),
        )
        duration = _run_stage("frame-sampling", lambda: config.extractor.probe(video_ref))[0]

        spans = _run_stage(
            "segmentation",
            lambda: segment_sections(
                samples,
                gateway,
                duration_sec=duration,
                hash_threshold=config.hash_threshold,
                min_section_sec=config.min_section_sec,
            ),
        )

        sections: list[Section] = []
        for i, span in enumerate(spans):
            extract = _run_stage(
                "slide-extract", lambda span=span: extract_slide(span.key_frame.image_ref, gateway)
            )
            sections.append(
                Section(
                    id=f"s{i:03d}",
                    start_sec=span.start_sec,
                    end_sec=span.end_sec,
                    slide_image_ref=str(span.key_frame.image_ref),
                    title=extract.title,
                    main_concepts=list(extract.main_topics),
                    key_points=key_point_sentences(extract.description),
                    content_fingerprint=extract.content_fingerprint,
                )
            )

        _run_stage("transcript-partition", lambda: _partition_transcript(segments, sections))

        for section, span in zip(sections, spans):
            section.quizzes = _run_stage(
                "quiz-generation",
                lambda section=section: generate_quiz_bank(
                    section, gateway, config.questions_per_section
                ),
            )
            section.highlights = _run_stage(
                "highlight-generation",
                lambda section=section, span=span: generate_highlights(
                    section, gateway, span.key_frame.image_ref
                ),
            )

        examples: list[ExampleAsset] = []
        if examples_dir is not None:
            examples = _run_stage(
                "examples-ingest",
                lambda: _collect_examples(
                    Path(examples_dir), spans, [s.id for s in sections]
                ),
            )

        stem = video_ref.stem
        bundle = LectureBundle(
            id=config.bundle_id or _slug(stem),
            title=config.title or stem.replace("_", " ").replace("-", " ").strip(),
            video_ref=str(video_ref),
            duration_sec=duration,
            sections=sections,
            examples=examples,
            created_at=config.created_at,
        )
        _run_stage("assemble", lambda: save_bundle(bundle, out_dir))
    return bundle
