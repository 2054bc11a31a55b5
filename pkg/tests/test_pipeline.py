"""Preprocessing pipeline tests: transcripts, frames, segmentation, build."""

from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_slide, make_video
from lecturekit.bundle import MS, load_bundle, validate_bank
from lecturekit.bundle.model import Section, TranscriptSegment
from lecturekit.errors import (
    BudgetExceeded,
    PartialQuizBank,
    StageError,
    TranscriptError,
    VideoUnreadable,
)
from lecturekit.gateway import Gateway, MockProvider
from lecturekit.imaging import hamming, hash_file, hash_hex
from lecturekit.pipeline import (
    FrameSample,
    PipelineConfig,
    build_bundle,
    extract_slide,
    generate_highlights,
    generate_quiz_bank,
    is_new_slide,
    load_transcript,
    match_segment,
    normalize_box,
    parse_timestamp,
    parse_transcript,
    sample_frames,
    sample_timestamps,
    segment_sections,
    token_overlap,
)

SRT_TEXT = """\
1
00:00:00,000 --> 00:00:04,000
Atoms are mostly empty space.

2
00:00:04,000 --> 00:00:08,000
Electrons orbit far from the core.

3
00:00:08,000 --> 00:00:12,000
Annotations mark the shell model.

4
00:00:12,000 --> 00:00:16,000
The nucleus holds protons and neutrons.

5
00:00:16,000 --> 00:00:20,000
Strong force binds the nucleons together.

6
00:00:20,000 --> 00:00:24,000
Quarks build every proton and neutron.

7
00:00:24,000 --> 00:00:28,000
Gluons carry the strong interaction.

8
00:00:28,000 --> 00:00:30,000
That closes our tour of matter.
"""


def fresh_gateway(**kwargs) -> Gateway:
    return Gateway(MockProvider(), **kwargs)


@pytest.fixture(scope="module")
def lecture_inputs(tmp_path_factory) -> dict:
    """A 30 s lecture: slide A (annotated mid-way), slide B, slide C."""
    root = tmp_path_factory.mktemp("lecture")
    video = make_video(
        root / "lecture.mp4",
        [("left", 6.0), ("left+note", 4.0), ("top", 10.0), ("checker", 10.0)],
    )
    transcript = root / "lecture.srt"
    transcript.write_text(SRT_TEXT, encoding="utf-8")
    examples = root / "examples"
    examples.mkdir()
    (examples / "orbitals@12.html").write_text(
        "<!doctype html><title>Orbitals</title><body>demo</body>\n"
    )
    return {"root": root, "video": video, "transcript": transcript, "examples": examples}


@pytest.fixture(scope="module")
def lecture_samples(lecture_inputs, tmp_path_factory) -> list[FrameSample]:
    frames_dir = tmp_path_factory.mktemp("frames")
    return sample_frames(lecture_inputs["video"], 2.0, frames_dir)


@pytest.fixture(scope="module")
def built(lecture_inputs, tmp_path_factory) -> dict:
    out = tmp_path_factory.mktemp("bundles") / "out"
    bundle = build_bundle(
        lecture_inputs["video"],
        lecture_inputs["transcript"],
        lecture_inputs["examples"],
        fresh_gateway(),
        out,
    )
    return {"bundle": bundle, "out": out}


# --- transcript ingestion ----------------------------------------------------


def test_srt_parse_basic():
    segments = parse_transcript(SRT_TEXT)
    assert len(segments) == 8
    assert segments[0].start_sec == 0.0
    assert segments[0].end_sec == 4.0
    assert segments[0].text == "Atoms are mostly empty space."
    assert segments[-1].end_sec == 30.0


def test_vtt_parse_with_header_notes_and_tags():
    vtt = (
        "WEBVTT\n\nNOTE\nthis block is ignored\n\n"
        "intro\n00:00.000 --> 00:04.500\n<v Lecturer>Atoms are <b>small</b>.\n\n"
        "00:04.500 --> 00:09.000\nSecond line\ncontinues here.\n"
    )
    segments = parse_transcript(vtt)
    assert [seg.text for seg in segments] == [
        "Atoms are small.",
        "Second line continues here.",
    ]
    assert segments[0].end_sec == 4.5


def test_transcript_sorted_and_empty_cue_dropped():
    srt = (
        "1\n00:00:10,000 --> 00:00:12,000\nLater cue.\n\n"
        "2\n00:00:00,000 --> 00:00:02,000\nEarlier cue.\n\n"
        "3\n00:00:05,000 --> 00:00:06,000\n\n"
    )
    segments = parse_transcript(srt)
    assert [seg.text for seg in segments] == ["Earlier cue.", "Later cue."]


def test_transcript_without_cues_rejected():
    with pytest.raises(TranscriptError):
        parse_transcript("just some prose, no cues at all")


def test_transcript_reversed_cue_rejected():
    with pytest.raises(TranscriptError):
        parse_transcript("1\n00:00:05,000 --> 00:00:04,000\nBackwards.\n")


def test_transcript_missing_file():
    with pytest.raises(TranscriptError) as err:
        load_transcript("/nonexistent/captions.srt")
    assert "not found" in str(err.value)


def test_timestamp_formats():
    assert parse_timestamp("01:02:03,456") == pytest.approx(3723.456)
    assert parse_timestamp("02:03.456") == pytest.approx(123.456)
    assert parse_timestamp("00:00:00,001") == pytest.approx(0.001)
    with pytest.raises(ValueError):
        parse_timestamp("three seconds in")


# --- frame sampling -----------------------------------------------------------


def test_sample_grid_600s_interval_2s():
    points = sample_timestamps(600.0, 2.0)
    assert len(points) == 301
    assert points[0] == 0.0
    assert points[-1] == 600.0
    assert all(b > a for a, b in zip(points, points[1:]))


@given(
    duration=st.floats(min_value=0.5, max_value=5000.0),
    interval=st.floats(min_value=0.1, max_value=60.0),
)
@settings(max_examples=200)
def test_sample_grid_matches_counting_oracle(duration, interval):
    points = sample_timestamps(duration, interval)
    # independent count: enumerate multiples below duration one by one
    expected = 0
    k = 0
    while k * interval <= duration:
        expected += 1
        k += 1
    if duration - (expected - 1) * interval > 1e-3:
        expected += 1
    assert len(points) == expected
    assert all(b > a for a, b in zip(points, points[1:]))
    assert points[-1] <= duration + 1e-9


def test_sample_frames_on_lecture_video(lecture_samples):
    # 30 s at 2 s intervals: grid points 0..30 inclusive
    assert len(lecture_samples) == 16
    assert [s.timestamp_sec for s in lecture_samples] == [2.0 * k for k in range(16)]
    for sample in lecture_samples:
        assert sample.image_ref.is_file()
        assert 0 <= sample.perceptual_hash < 2**64


def test_static_video_hashes_equal(tmp_path):
    video = make_video(tmp_path / "static.mp4", [("left", 10.0)])
    samples = sample_frames(video, 2.0, tmp_path / "frames")
    assert len(samples) == 6
    assert len({s.perceptual_hash for s in samples}) == 1


def test_unreadable_video(tmp_path):
    with pytest.raises(VideoUnreadable):
        sample_frames(tmp_path / "missing.mp4", 2.0, tmp_path)
    junk = tmp_path / "junk.mp4"
    junk.write_bytes(b"not a video at all")
    with pytest.raises(VideoUnreadable):
        sample_frames(junk, 2.0, tmp_path)


def test_bad_interval_rejected(lecture_inputs, tmp_path):
    with pytest.raises(ValueError):
        sample_frames(lecture_inputs["video"], 0.0, tmp_path)


# --- segmentation -------------------------------------------------------------


def by_time(samples: list[FrameSample], t: float) -> FrameSample:
    return next(s for s in samples if abs(s.timestamp_sec - t) < 1e-9)


def test_fixture_hash_distances(lecture_samples):
    """Premise guard: the synthetic video hits the engineered distance bands."""
    d_note = hamming(
        by_time(lecture_samples, 4.0).perceptual_hash,
        by_time(lecture_samples, 6.0).perceptual_hash,
    )
    d_slide1 = hamming(
        by_time(lecture_samples, 8.0).perceptual_hash,
        by_time(lecture_samples, 10.0).perceptual_hash,
    )
    d_slide2 = hamming(
        by_time(lecture_samples, 18.0).perceptual_hash,
        by_time(lecture_samples, 20.0).perceptual_hash,
    )
    assert 10 < d_note <= 16, d_note
    assert d_slide1 > 16, d_slide1
    assert d_slide2 > 16, d_slide2


def test_segments_three_sections(lecture_samples):
    gateway = fresh_gateway()
    spans = segment_sections(lecture_samples, gateway, duration_sec=30.0)
    assert len(spans) == 3
    assert spans[0].start_sec == 0.0
    assert spans[-1].end_sec == 30.0
    assert abs(spans[1].start_sec - 10.0) <= 2.0
    assert abs(spans[2].start_sec - 20.0) <= 2.0
    # sections tile the video: each span starts where the previous ended
    for prev, nxt in zip(spans, spans[1:]):
        assert prev.end_sec == nxt.start_sec
    # key frame is the LAST frame of its section; for section 0 that means
    # the annotated variant, not the clean early frames
    assert spans[0].key_frame.timestamp_sec >= 8.0
    for span in spans:
        assert span.key_frame is span.samples[-1]


def test_annotation_change_is_not_a_boundary(lecture_samples):
    gateway = fresh_gateway()
    a = by_time(lecture_samples, 4.0)
    b = by_time(lecture_samples, 6.0)
    assert is_new_slide(a, b, gateway, 10) is False
    assert gateway.calls_made == 1  # distance > 10 forced the model call


def test_identical_hashes_make_one_section_without_model_calls(tmp_path):
    video = make_video(tmp_path / "static.mp4", [("top", 10.0)])
    samples = sample_frames(video, 2.0, tmp_path / "frames")
    gateway = fresh_gateway()
    spans = segment_sections(samples, gateway, duration_sec=10.0)
    assert len(spans) == 1
    assert (spans[0].start_sec, spans[0].end_sec) == (0.0, 10.0)
    assert gateway.calls_made == 0


def _png_samples(tmp_path: Path, plan: list[tuple[str, float]]) -> list[FrameSample]:
    """FrameSamples straight from PNG patterns, no video decode involved."""
    from PIL import Image

    from conftest import slide_pattern

    samples = []
    for i, (kind, t) in enumerate(plan):
        path = tmp_path / f"still_{i:03d}.png"
        Image.fromarray(slide_pattern(kind)[:, :, ::-1]).save(path)
        samples.append(FrameSample(t, path, hash_file(path)))
    return samples


def test_short_trailing_section_merges_into_predecessor(tmp_path):
    plan = [("left", t) for t in (0.0, 2.0, 4.0, 6.0, 8.0, 10.0)] + [("top", 12.0)]
    samples = _png_samples(tmp_path, plan)
    assert hamming(samples[-2].perceptual_hash, samples[-1].perceptual_hash) > 16
    spans = segment_sections(samples, fresh_gateway(), duration_sec=13.0)
    assert len(spans) == 1
    assert (spans[0].start_sec, spans[0].end_sec) == (0.0, 13.0)
    assert spans[0].key_frame.timestamp_sec == 12.0


def test_short_first_section_merges_into_successor(tmp_path):
    plan = [("left", 0.0), ("left", 2.0)] + [("top", t) for t in (4.0, 6.0, 8.0, 10.0)]
    samples = _png_samples(tmp_path, plan)
    spans = segment_sections(samples, fresh_gateway(), duration_sec=10.0)
    assert len(spans) == 1
    assert (spans[0].start_sec, spans[0].end_sec) == (0.0, 10.0)


def test_single_short_video_keeps_its_only_section(tmp_path):
    samples = _png_samples(tmp_path, [("left", 0.0), ("left", 2.0)])
    spans = segment_sections(samples, fresh_gateway(), duration_sec=3.0)
    assert len(spans) == 1


def test_every_sample_in_exactly_one_section(lecture_samples):
    spans = segment_sections(lecture_samples, fresh_gateway(), duration_sec=30.0)

    def owners(t: float) -> int:
        count = 0
        for i, span in enumerate(spans):
            last = i == len(spans) - 1
            if span.start_sec <= t < span.end_sec or (last and t == span.end_sec):
                count += 1
        return count

    assert all(owners(s.timestamp_sec) == 1 for s in lecture_samples)


# --- slide extraction ---------------------------------------------------------


def test_extract_fingerprint_is_image_hash(tmp_path):
    slide = make_slide(
        tmp_path / "slide.png",
        boxes=[(40, 40, 300, 120)],
        metadata={"title": "Wave Mechanics", "topics": "waves, phase"},
    )
    extract = extract_slide(slide, fresh_gateway())
    assert extract.content_fingerprint == hash_hex(hash_file(slide))
    assert extract.title == "Wave Mechanics"
    assert extract.main_topics == ("waves", "phase")
    assert extract.description


def test_extract_same_slide_cursor_moved_same_fingerprint(tmp_path):
    base = make_slide(tmp_path / "a.png", boxes=[(40, 40, 300, 120), (500, 300, 503, 303)])
    moved = make_slide(tmp_path / "b.png", boxes=[(40, 40, 300, 120), (560, 320, 563, 323)])
    assert hamming(hash_file(base), hash_file(moved)) == 0  # premise: cursor-sized change
    gateway = fresh_gateway()
    assert (
        extract_slide(base, gateway).content_fingerprint
        == extract_slide(moved, gateway).content_fingerprint
    )


def test_extract_blank_frame(tmp_path):
    blank = make_slide(tmp_path / "blank.png", boxes=[(0, 0, 640, 360)], seed_color=0)
    extract = extract_slide(blank, fresh_gateway())
    assert extract.main_topics == ()
    assert extract.title == "Blank slide"
    assert extract.content_fingerprint


# --- quiz banks ---------------------------------------------------------------


def _section(tmp_path: Path) -> Section:
    slide = make_slide(
        tmp_path / "quiz-slide.png",
        boxes=[(40, 40, 300, 120)],
        metadata={"title": "Nuclear Forces"},
    )
    return Section(
        id="s000",
        start_sec=0.0,
        end_sec=30.0,
        slide_image_ref=str(slide),
        title="Nuclear Forces",
        main_concepts=["strong force", "binding energy"],
        key_points=["force carriers are gluons"],
        content_fingerprint="feed",
        transcript=[
            TranscriptSegment(0.0, 15.0, "The strong force binds nucleons."),
            TranscriptSegment(15.0, 30.0, "Binding energy explains fusion."),
        ],
    )


def test_quiz_bank_covers_all_levels(tmp_path):
    section = _section(tmp_path)
    bank = generate_quiz_bank(section, fresh_gateway(), 3)
    assert sorted(bank) == [1, 2, 3, 4, 5]
    validate_bank(bank, "bank")
    for level, items in bank.items():
        assert len(items) == 3
        assert all(item.difficulty == level for item in items)
        assert {item.type for item in items} <= {"multiple-choice", "true-false", "fill-blank"}


def test_quiz_bank_zero_questions(tmp_path):
    gateway = fresh_gateway()
    bank = generate_quiz_bank(_section(tmp_path), gateway, 0)
    assert bank == {1: [], 2: [], 3: [], 4: [], 5: []}
    assert gateway.calls_made == 0


def test_quiz_bank_deterministic(tmp_path):
    section = _section(tmp_path)
    assert generate_quiz_bank(section, fresh_gateway(), 2) == generate_quiz_bank(
        section, fresh_gateway(), 2
    )


def test_quiz_bank_partial_failure(tmp_path):
    section = _section(tmp_path)
    gateway = fresh_gateway(max_calls=2)
    with pytest.raises(PartialQuizBank) as err:
        generate_quiz_bank(section, gateway, 3)
    assert err.value.level == 3
    assert sorted(err.value.partial) == [1, 2]
    assert isinstance(err.value.cause, BudgetExceeded)


# --- highlights ---------------------------------------------------------------


def _highlight_section(tmp_path: Path, blocks: str) -> Section:
    slide = make_slide(
        tmp_path / "hl-slide.png",
        boxes=[(40, 40, 300, 120)],
        metadata={"blocks": blocks},
    )
    return Section(
        id="s000",
        start_sec=0.0,
        end_sec=20.0,
        slide_image_ref=str(slide),
        title="Highlights",
        content_fingerprint="feed",
        transcript=[
            TranscriptSegment(0.0, 9.0, "Alpha beta gamma."),
            TranscriptSegment(9.0, 20.0, "Delta epsilon zeta."),
        ],
    )


def test_highlight_reference_box_normalization(tmp_path):
    section = _highlight_section(tmp_path, "[[100, 200, 300, 400]]")
    entries = generate_highlights(section, fresh_gateway())
    assert len(entries) == 1
    assert entries[0].box == (0.1, 0.2, 0.3, 0.4)


def test_highlight_exact_transcript_match_gets_segment_range(tmp_path):
    section = _highlight_section(tmp_path, "[[100, 200, 300, 400], [500, 500, 700, 600]]")
    entries = generate_highlights(section, fresh_gateway())
    assert entries[0].relevant_transcript == "Alpha beta gamma."
    assert (entries[0].start_sec, entries[0].end_sec) == (0.0, 9.0)
    assert entries[1].relevant_transcript == "Delta epsilon zeta."
    assert (entries[1].start_sec, entries[1].end_sec) == (9.0, 20.0)


def test_highlight_empty_transcript_has_no_range(tmp_path):
    blocks = "[[100, 200, 300, 400], [500, 500, 700, 600], [10, 10, 90, 90]]"
    section = _highlight_section(tmp_path, blocks)
    entries = generate_highlights(section, fresh_gateway())
    assert entries[2].relevant_transcript == ""
    assert not entries[2].active


@given(
    raw=st.lists(st.integers(min_value=-500, max_value=1500), min_size=4, max_size=4)
)
def test_normalized_boxes_stay_in_unit_square(raw):
    box = normalize_box(raw)
    if box is not None:
        x0, y0, x1, y1 = box
        assert 0.0 <= x0 < x1 <= 1.0
        assert 0.0 <= y0 < y1 <= 1.0


def test_token_overlap_rules():
    assert token_overlap("Alpha beta gamma.", "alpha BETA gamma") == 1.0
    assert token_overlap("alpha beta", "delta epsilon") == 0.0
    assert token_overlap("", "anything") == 0.0
    # containment: a short quote inside a longer segment matches fully
    assert token_overlap("strong force", "the strong force binds nucleons") == 1.0


def test_match_segment_threshold_and_best_choice():
    segments = [
        TranscriptSegment(0.0, 5.0, "Quarks build protons."),
        TranscriptSegment(5.0, 9.0, "Gluons carry the strong interaction force."),
    ]
    assert match_segment("gluons carry interaction", segments) is segments[1]
    assert match_segment("completely unrelated words here", segments) is None


# --- end-to-end build ---------------------------------------------------------


def test_build_bundle_round_trips(built):
    bundle = built["bundle"]
    loaded = load_bundle(built["out"])
    assert len(loaded.sections) == 3
    assert [s.id for s in loaded.sections] == ["s000", "s001", "s002"]
    assert loaded.duration_sec == pytest.approx(30.0, abs=0.5)
    assert abs(loaded.sections[1].start_sec - 10.0) <= 2.0
    assert abs(loaded.sections[2].start_sec - 20.0) <= 2.0
    assert loaded.id == bundle.id == "lecture"
    for section in loaded.sections:
        assert section.title
        assert section.content_fingerprint
        assert section.transcript, "every section got transcript segments"
        assert sorted(section.quizzes) == [1, 2, 3, 4, 5]
        assert all(len(items) == 3 for items in section.quizzes.values())
        assert section.highlights
        for entry in section.highlights:
            x0, y0, x1, y1 = entry.box
            assert 0.0 <= x0 < x1 <= 1.0 and 0.0 <= y0 < y1 <= 1.0


def test_build_assigns_example_to_covering_section(built):
    loaded = load_bundle(built["out"])
    assert len(loaded.examples) == 1
    asset = loaded.examples[0]
    assert asset.trigger_sec == 12.0
    assert asset.title == "orbitals"
    owner = loaded.section_by_id(asset.section_id)
    assert owner.start_sec - MS <= 12.0 <= owner.end_sec + MS
    assert owner.id == "s001"
    assert loaded.resolve(asset.html_ref).is_file()


def test_build_partitions_transcript_by_midpoint(built):
    loaded = load_bundle(built["out"])
    originals = parse_transcript(SRT_TEXT)
    by_text = {}
    for section in loaded.sections:
        for seg in section.transcript:
            by_text[seg.text] = section
    for cue in originals:
        owner = by_text[cue.text]
        mid = (cue.start_sec + cue.end_sec) / 2
        assert owner.start_sec - MS <= mid <= owner.end_sec + MS


def test_build_is_idempotent(lecture_inputs, tmp_path):
    out1, out2 = tmp_path / "b1", tmp_path / "b2"
    b1 = build_bundle(
        lecture_inputs["video"], lecture_inputs["transcript"], None, fresh_gateway(), out1
    )
    b2 = build_bundle(
        lecture_inputs["video"], lecture_inputs["transcript"], None, fresh_gateway(), out2
    )
    assert b1 == b2  # dataclass equality ignores the root path
    assert (out1 / "manifest.json").read_bytes() == (out2 / "manifest.json").read_bytes()
    for rel in ("sections/000/content.json", "sections/001/quiz.json", "sections/002/highlights.json"):
        assert (out1 / rel).read_bytes() == (out2 / rel).read_bytes()


def test_build_missing_transcript_names_the_stage(lecture_inputs, tmp_path):
    with pytest.raises(StageError) as err:
        build_bundle(
            lecture_inputs["video"],
            lecture_inputs["root"] / "nope.srt",
            None,
            fresh_gateway(),
            tmp_path / "out",
        )
    assert err.value.stage == "transcript-ingest"


def test_build_rejects_unlabelled_example_file(lecture_inputs, tmp_path):
    bad_dir = tmp_path / "examples"
    bad_dir.mkdir()
    (bad_dir / "mystery.html").write_text("<html></html>")
    with pytest.raises(StageError) as err:
        build_bundle(
            lecture_inputs["video"],
            lecture_inputs["transcript"],
            bad_dir,
            fresh_gateway(),
            tmp_path / "out",
        )
    assert err.value.stage == "examples-ingest"


def test_build_examples_manifest_dir(lecture_inputs, tmp_path):
    ex_dir = tmp_path / "examples"
    ex_dir.mkdir()
    (ex_dir / "forces.html").write_text("<html><body>forces demo</body></html>")
    (ex_dir / "examples.json").write_text(
        '[{"file": "forces.html", "triggerSec": 25.0, "title": "Force Playground"}]\n'
    )
    bundle = build_bundle(
        lecture_inputs["video"],
        lecture_inputs["transcript"],
        ex_dir,
        fresh_gateway(),
        tmp_path / "out",
    )
    assert len(bundle.examples) == 1
    assert bundle.examples[0].title == "Force Playground"
    assert bundle.examples[0].section_id == "s002"


def test_build_config_knobs(lecture_inputs, tmp_path):
    config = PipelineConfig(
        questions_per_section=0,
        bundle_id="phys-101",
        title="Physics 101",
        created_at="2026-02-01T00:00:00Z",
    )
    bundle = build_bundle(
        lecture_inputs["video"],
        lecture_inputs["transcript"],
        None,
        fresh_gateway(),
        tmp_path / "out",
        config,
    )
    assert bundle.id == "phys-101"
    assert bundle.title == "Physics 101"
    assert bundle.created_at == "2026-02-01T00:00:00Z"
    for section in bundle.sections:
        assert all(items == [] for items in section.quizzes.values())
