"""Preprocessing pipeline: video + transcript to a lecture bundle."""

from .build import PipelineConfig, build_bundle
from .extract import SlideExtract, extract_slide, key_point_sentences
from .frames import (
    FfmpegFrameExtractor,
    FrameExtractor,
    FrameSample,
    OpenCVFrameExtractor,
    sample_frames,
    sample_timestamps,
)
from .highlights import (
    REFERENCE_RESOLUTION,
    TOKEN_OVERLAP_THRESHOLD,
    generate_highlights,
    match_segment,
    normalize_box,
    token_overlap,
)
from .quizzes import DEFAULT_QUESTIONS_PER_SECTION, generate_quiz_bank, quiz_bindings
from .segment import (
    HASH_ESCALATION_THRESHOLD,
    MIN_SECTION_SEC,
    SectionSpan,
    is_new_slide,
    segment_sections,
)
from .transcripts import load_transcript, parse_timestamp, parse_transcript

__all__ = [
    "DEFAULT_QUESTIONS_PER_SECTION",
    "FfmpegFrameExtractor",
    "FrameExtractor",
    "FrameSample",
    "HASH_ESCALATION_THRESHOLD",
    "MIN_SECTION_SEC",
    "OpenCVFrameExtractor",
    "PipelineConfig",
    "REFERENCE_RESOLUTION",
    "SectionSpan",
    "SlideExtract",
    "TOKEN_OVERLAP_THRESHOLD",
    "build_bundle",
    "extract_slide",
    "generate_highlights",
    "generate_quiz_bank",
    "is_new_slide",
    "key_point_sentences",
    "match_segment",
    "normalize_box",
    "parse_timestamp",
    "parse_transcript",
    "quiz_bindings",
    "sample_frames",
    "sample_timestamps",
    "segment_sections",
    "token_overlap",
    "load_transcript",
]
