"""Shared fixtures: synthetic slides, videos and a small reference bundle."""

from __future__ import annotations

from pathlib import Path

import cv2
import numpy as np
import pytest
from PIL import Image, ImageDraw, PngImagePlugin

from lecturekit.bundle.model import (
    ExampleAsset,
    HighlightEntry,
    LectureBundle,
    QuizItem,
    Section,
    TranscriptSegment,
)

# Frame geometry chosen so the 8x8 hash grid lands on integer pixel cells:
# 320/8 = 40 px wide, 184/8 = 23 px tall.
VIDEO_SIZE = (320, 184)
VIDEO_FPS = 5.0


def slide_pattern(kind: str, size: tuple[int, int] = VIDEO_SIZE) -> np.ndarray:
    """Uniform block patterns whose pairwise hash distances are engineered.

    left vs top and top vs checker differ in ~32 of 64 hash cells (clear
    slide changes); left vs left+note differs in the 12 cells the note box
    covers (an annotation-sized change).
    """
    w, h = size
    cell_w, cell_h = w // 8, h // 8
    img = np.full((h, w, 3), 255, np.uint8)
    if kind == "left":
        img[:, : w // 2] = 30
    elif kind == "left+note":
        img[:, : w // 2] = 30
        img[2 * cell_h : 6 * cell_h, 4 * cell_w : 7 * cell_w] = 30
    elif kind == "top":
        img[: h // 2, :] = 30
    elif kind == "checker":
        for by in range(4):
            for bx in range(4):
                if (bx + by) % 2 == 0:
                    img[
                        by * 2 * cell_h : (by + 1) * 2 * cell_h,
                        bx * 2 * cell_w : (bx + 1) * 2 * cell_w,
                    ] = 30
    elif kind != "blank":
        raise ValueError(f"unknown pattern {kind!r}")
    return img


def make_video(
    path: Path,
    segments: list[tuple[str, float]],
    *,
    fps: float = VIDEO_FPS,
    size: tuple[int, int] = VIDEO_SIZE,
) -> Path:
    """Write an mp4 of constant-pattern segments given as (kind, seconds)."""
    path.parent.mkdir(parents=True, exist_ok=True)
    writer = cv2.VideoWriter(str(path), cv2.VideoWriter_fourcc(*"mp4v"), fps, size)
    assert writer.isOpened(), "mp4v encoder unavailable"
    for kind, seconds in segments:
        frame = slide_pattern(kind, size)
        for _ in range(int(round(seconds * fps))):
            writer.write(frame)
    writer.release()
    return path


def make_slide(
    path: Path,
    *,
    size: tuple[int, int] = (640, 360),
    boxes: list[tuple[int, int, int, int]] | None = None,
    seed_color: int = 20,
    metadata: dict[str, str] | None = None,
) -> Path:
    """Write a synthetic slide: white background with dark filled boxes.

    ``metadata`` is stored as PNG text chunks; the offline providers read it
    back the way a vision model would read the rendered content.
    """
    img = Image.new("RGB", size, (255, 255, 255))
    draw = ImageDraw.Draw(img)
    for box in boxes or []:
        draw.rectangle(box, fill=(seed_color, seed_color, seed_color))
    info = PngImagePlugin.PngInfo()
    for key, value in (metadata or {}).items():
        info.add_text(key, value)
    path.parent.mkdir(parents=True, exist_ok=True)
    img.save(path, pnginfo=info)
    return path


def quiz_item(level: int, n: int = 0, qtype: str = "multiple-choice") -> QuizItem:
    if qtype == "multiple-choice":
        options = (f"opt-a{n}", f"opt-b{n}", f"opt-c{n}", f"opt-d{n}")
        return QuizItem(
            type=qtype,
            question=f"Level {level} question {n}?",
            options=options,
            correct_answer=options[0],
            explanation=f"Explanation {level}.{n}",
            difficulty=level,
        )
    if qtype == "true-false":
        return QuizItem(
            type=qtype,
            question=f"Statement {level}.{n} holds.",
            options=(),
            correct_answer="True",
            explanation=f"Explanation {level}.{n}",
            difficulty=level,
        )
    return QuizItem(
        type="fill-blank",
        question=f"The ____ binds level {level}.{n}.",
        options=(),
        correct_answer=f"term{n}",
        explanation=f"Explanation {level}.{n}",
        difficulty=level,
        answer_synonyms=(f"term {n}",),
    )


def full_bank(per_level: int = 3) -> dict[int, list[QuizItem]]:
    types = ["multiple-choice", "true-false", "fill-blank"]
    return {
        level: [quiz_item(level, n, types[n % 3]) for n in range(per_level)]
        for level in range(1, 6)
    }


def build_bundle(root: Path, *, with_example: bool = True) -> LectureBundle:
    """Three-section bundle with slides, transcripts, quizzes and highlights."""
    spans = [(0.0, 40.0), (40.0, 90.0), (90.0, 120.0)]
    titles = ["Atomic Structure", "Inside the Nucleus", "Fundamental Forces"]
    sections = []
    for i, ((start, end), title) in enumerate(zip(spans, titles)):
        slide = make_slide(
            root / f"sections/{i:03d}/slide.png",
            boxes=[(60 + 40 * i, 60, 260 + 40 * i, 160)],
            seed_color=20 + 60 * i,
            metadata={"title": title},
        )
        mid = (start + end) / 2
        sections.append(
            Section(
                id=f"s{i}",
                start_sec=start,
                end_sec=end,
                slide_image_ref=str(slide.relative_to(root)),
                title=title,
                main_concepts=[f"concept-{i}a", f"concept-{i}b"],
                key_points=[f"point-{i}"],
                equations=["E = mc^2"] if i == 2 else None,
                diagrams=None,
                content_fingerprint=f"{i:016x}",
                transcript=[
                    TranscriptSegment(start, mid, f"First half of {title.lower()}."),
                    TranscriptSegment(mid, end, f"Second half of {title.lower()}."),
                ],
                quizzes=full_bank(),
                highlights=[
                    HighlightEntry(
                        box=(0.1, 0.2, 0.4, 0.5),
                        relevant_transcript=f"First half of {title.lower()}.",
                        start_sec=start,
                        end_sec=mid,
                    ),
                    HighlightEntry(box=(0.5, 0.2, 0.8, 0.5), relevant_transcript=""),
                ],
            )
        )
    examples = []
    if with_example:
        html = root / "examples" / "orbitals.html"
        html.parent.mkdir(parents=True, exist_ok=True)
        html.write_text("<!doctype html><title>Orbitals</title><body>demo</body>\n")
        examples.append(
            ExampleAsset(
                section_id="s1",
                trigger_sec=60.0,
                html_ref="examples/orbitals.html",
                title="Orbitals",
            )
        )
    return LectureBundle(
        id="lec-atoms",
        title="Atoms and Forces",
        video_ref="atoms.mp4",
        duration_sec=120.0,
        sections=sections,
        examples=examples,
        created_at="2026-01-05T12:00:00Z",
        root=root,
    )


@pytest.fixture
def bundle(tmp_path: Path) -> LectureBundle:
    return build_bundle(tmp_path / "bundle-src")
