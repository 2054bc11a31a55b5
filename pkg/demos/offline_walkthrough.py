"""End-to-end library tour: synthesize a lecture, preprocess it, run a session.

Everything is offline and deterministic. Run with:

    python3 demos/offline_walkthrough.py
"""

from __future__ import annotations

import tempfile
from pathlib import Path

import cv2
import numpy as np

from lecturekit.gateway import Gateway, MockProvider
from lecturekit.media import ManualClock
from lecturekit.pipeline import build_bundle
from lecturekit.session import LectureSession

SRT = """1
00:00:00,000 --> 00:00:20,000
We begin with the structure of the atom and its electron shells.

2
00:00:20,000 --> 00:00:40,000
Next we look inside the nucleus at protons and neutrons.

3
00:00:40,000 --> 00:01:00,000
Finally the fundamental forces that hold matter together.
"""


def synth_video(path: Path) -> Path:
    """Three visually distinct 20 s slides at 5 fps."""
    size, fps = (320, 184), 5.0
    writer = cv2.VideoWriter(
        str(path), cv2.VideoWriter_fourcc(*"mp4v"), fps, size
    )
    for slide in range(3):
        frame = np.full((size[1], size[0], 3), 255, np.uint8)
        if slide == 0:
            frame[:, : size[0] // 2] = 30
        elif slide == 1:
            frame[: size[1] // 2, :] = 30
        else:
            frame[::2, ::2] = 30
        for _ in range(int(20 * fps)):
            writer.write(frame)
    writer.release()
    return path


def main() -> None:
    root = Path(tempfile.mkdtemp(prefix="lecturekit-demo-"))
    video = synth_video(root / "lecture.mp4")
    transcript = root / "lecture.srt"
    transcript.write_text(SRT, encoding="utf-8")

    print(f"workspace: {root}")
    print("\n== preprocessing ==")
    bundle = build_bundle(video, transcript, None, Gateway(MockProvider()), root / "bundle")
    for section in bundle.sections:
        print(
            f"  {section.id}: {section.start_sec:5.1f}-{section.end_sec:5.1f}s"
            f"  '{section.title}'  quizzes at levels {sorted(section.quizzes)}"
        )

    print("\n== live session ==")
    clock = ManualClock()
    events: list[tuple[str, dict]] = []
    session = LectureSession(
        "demo-session",
        bundle,
        Gateway(MockProvider()),
        clock,
        interests=("chess",),
        emit=lambda kind, payload: events.append((kind, payload)),
        log_path=root / "session.jsonl",
    )

    text, plan, _ = session.ask_clarification((0.1, 0.1, 0.5, 0.5), "Can you make an analogy?")
    print(f"clarify -> {len(text.split())} words, overlay at {plan.region.rect}")
    clock.run_until_idle()  # let the stub voice finish speaking

    results = session.request_visual((0.05, 0.05, 0.6, 0.9))
    print(f"visual  -> {len(results)} image results, first: {results[0].title!r}")
    session.dismiss_visual()

    item = session.serve_quiz()
    correct, _ = session.answer_quiz(item.correct_answer)
    print(f"quiz    -> {item.type} at level {item.difficulty}, answered correct={correct}")

    story, _ = session.start_break(1)
    print(f"break   -> {len(story.split())} word story mentioning your interests")
    clock.run_until_idle()  # break timer and story playback both finish

    session.set_position(45.0)
    session.add_note("revisit the strong force", (0.2, 0.2, 0.8, 0.6))

    document = session.build_summary()
    print(f"summary -> {len(document.canvas)} cards in {len(document.sections)} columns")
    kinds = [kind for kind, _ in events]
    print(f"events  -> {len(events)} emitted ({', '.join(sorted(set(kinds)))})")
    print(f"log     -> {root / 'session.jsonl'}")


if __name__ == "__main__":
    main()
