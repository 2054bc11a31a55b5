"""Acceptance gate: one test and one PASS line per core guarantee.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
lines; a failed criterion shows up as that test's pytest failure.
"""

from __future__ import annotations

import json
import random
import socket
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from conftest import build_bundle as reference_bundle
from conftest import make_video
from oracle_layout import best_region_oracle
from test_session import assert_walk_invariants, run_model_walk
from lecturekit.bundle import QUIZ_TYPES, validate_quiz_item
from lecturekit.errors import NoFreeRegion
from lecturekit.gateway import (
    Gateway,
    MockProvider,
    TEMPLATE_IDS,
    load_template,
    render_prompt,
    scan_placeholders,
)
from lecturekit.layout import OccupancyGrid, detect_content_boxes, plan_overlay, select_free_region
from lecturekit.pipeline import build_bundle

GOLDEN_PROMPTS = Path(__file__).parent / "golden" / "prompts"

SRT_TEXT = """1
00:00:00,000 --> 00:00:20,000
We begin with the structure of the atom and its electron shells.

2
00:00:20,000 --> 00:00:40,000
Next we look inside the nucleus at protons and neutrons.

3
00:00:40,000 --> 00:01:00,000
Finally the fundamental forces that hold matter together.
"""


def report(name: str, detail: str) -> None:
    print(f"\n[PASS] {name}: {detail}")


# --- placement ---------------------------------------------------------------


def test_layout_oracle_equivalence():
    rng = random.Random(0xACCE97)
    t0 = time.perf_counter()
    checked = 0
    for _ in range(1000):
        rows, cols = rng.randint(1, 12), rng.randint(1, 12)
        density = rng.uniform(0.05, 0.95)
        cells = np.array(
            [[rng.random() < density for _ in range(cols)] for _ in range(rows)], dtype=bool
        )
        anchor = (rng.random(), rng.random())
        min_cells = rng.choice((1, 1, 1, 2, 4))
        expected = best_region_oracle(cells, anchor, min_cells)
        grid = OccupancyGrid(cols=cols, rows=rows, cells=cells)
        try:
            got = select_free_region(grid, anchor, min_cells).grid_rect
        except NoFreeRegion:
            got = None
        assert got == expected, f"grid {rows}x{cols} anchor {anchor}: {got} != {expected}"
        checked += 1
    elapsed = time.perf_counter() - t0
    assert elapsed < 30.0, f"oracle sweep took {elapsed:.1f}s"
    report(
        "layout-oracle-equivalence",
        f"{checked} random grids up to 12x12 agree with exhaustive enumeration in {elapsed:.1f}s",
    )


def test_layout_soundness():
    rng = random.Random(0x50F7)
    width, height = 400, 225
    modal_count = scroll_count = 0
    for i in range(1000):
        img = np.full((height, width, 3), 255, np.uint8)
        for _ in range(rng.randint(0, 5)):
            x0 = rng.randint(0, width - 20)
            y0 = rng.randint(0, height - 16)
            x1 = x0 + rng.randint(16, min(width - x0, width // 2))
            y1 = y0 + rng.randint(12, min(height - y0, height // 2))
            img[y0:y1, x0:x1] = rng.randint(0, 90)
        anchor = (rng.random(), rng.random())
        text = "x" * rng.randint(0, 1200)
        plan = plan_overlay(img, anchor, text)

        assert plan.scrollable == (len(text) > plan.estimated_capacity_chars)
        if plan.modal:
            modal_count += 1
            continue
        rx0, ry0, rx1, ry1 = plan.region.rect
        for bx0, by0, bx1, by1 in detect_content_boxes(img):
            overlap_w = min(rx1, bx1) - max(rx0, bx0)
            overlap_h = min(ry1, by1) - max(ry0, by0)
            assert overlap_w <= 1e-9 or overlap_h <= 1e-9, (
                f"slide {i}: region {plan.region.rect} overlaps box {(bx0, by0, bx1, by1)}"
            )
        if plan.scrollable:
            scroll_count += 1
    report(
        "layout-soundness",
        f"1000 random slides placed clear of all detected boxes "
        f"({scroll_count} scrollable, {modal_count} modal)",
    )


# --- preprocessing -------------------------------------------------------------


@pytest.fixture(scope="module")
def offline_lecture(tmp_path_factory) -> dict:
    root = tmp_path_factory.mktemp("acceptance")
    video = make_video(root / "lecture.mp4", [("left", 20.0), ("top", 20.0), ("checker", 20.0)])
    transcript = root / "lecture.srt"
    transcript.write_text(SRT_TEXT, encoding="utf-8")
    examples = root / "examples"
    examples.mkdir()
    (examples / "orbitals@12.html").write_text(
        "<!doctype html><title>Orbitals</title><body>demo</body>\n"
    )
    return {"root": root, "video": video, "transcript": transcript, "examples": examples}


@pytest.fixture(scope="module")
def pipeline_bundle(offline_lecture, tmp_path_factory):
    out = tmp_path_factory.mktemp("acceptance-bundle") / "lecture"
    return build_bundle(
        offline_lecture["video"],
        offline_lecture["transcript"],
        offline_lecture["examples"],
        Gateway(MockProvider()),
        out,
    )


def test_segmentation_end_to_end(pipeline_bundle, offline_lecture, tmp_path):
    interval = 2.0
    sections = pipeline_bundle.sections
    assert len(sections) == 3, f"expected 3 sections, got {len(sections)}"
    truth = (20.0, 40.0)
    for section, expected_end in zip(sections[:-1], truth):
        assert abs(section.end_sec - expected_end) <= interval + 1e-9, (
            f"{section.id} ends at {section.end_sec}, truth {expected_end}"
        )
    assert sections[0].start_sec == 0.0
    assert sections[-1].end_sec == pipeline_bundle.duration_sec

    annotated = make_video(
        tmp_path / "annotated.mp4", [("left", 10.0), ("left+note", 10.0)]
    )
    (tmp_path / "short.srt").write_text(SRT_TEXT.split("\n\n")[0] + "\n", encoding="utf-8")
    single = build_bundle(
        annotated, tmp_path / "short.srt", None, Gateway(MockProvider()), tmp_path / "single"
    )
    assert len(single.sections) == 1, "annotation-only change split the section"
    report(
        "segmentation-end-to-end",
        f"3-slide video -> 3 sections with boundaries within {interval}s; "
        "annotation-only video -> 1 section",
    )


# --- prompts -------------------------------------------------------------------

RENDER_BINDINGS = {
    "sameSlide": {},
    "slideExtract": {},
    "visualKeywords": {},
    "quizGen": {
        "questionsPerSection": 3,
        "title": "Photosynthesis",
        "mainConcepts": ["light reactions"],
        "keyPoints": ["chlorophyll absorbs light"],
        "equations": [],
        "diagrams": [],
        "transcript": "Plants turn light into sugar.",
        "difficulty": 3,
        "questionTypes": ["multiple-choice"],
    },
    "highlightGen": {"slideTranscript": "First sentence. Second sentence."},
    "clarify": {
        "currentVideoName": "Biology 101",
        "summaryText": "An overview of cells",
        "currentSlideContent": "Photosynthesis basics",
    },
    "breakStory": {
        "currentVideoName": "Biology 101",
        "breakDuration": 3,
        "userInterests": "cooking, football",
        "summaryText": "An overview of cells",
        "currentSlideContent": "Photosynthesis basics",
    },
}


def test_prompt_fidelity():
    from lecturekit.gateway.templates import TEMPLATE_FILES

    assert len(TEMPLATE_IDS) == 7
    for template_id in TEMPLATE_IDS:
        packaged = load_template(template_id)
        golden = (GOLDEN_PROMPTS / TEMPLATE_FILES[template_id]).read_text(encoding="utf-8")
        assert packaged == golden, f"{template_id}: packaged text drifted from golden copy"

        rendered = render_prompt(template_id, RENDER_BINDINGS[template_id])
        spans = scan_placeholders(packaged)
        # every byte outside a placeholder site must appear unchanged, in order
        cursor = pos = 0
        for start, end, _ in spans:
            chunk = packaged[cursor:start]
            found = rendered.find(chunk, pos)
            assert found >= 0, f"{template_id}: literal bytes changed near offset {cursor}"
            pos = found + len(chunk)
            cursor = end
        tail = packaged[cursor:]
        assert rendered.endswith(tail)
        assert "${" not in rendered, f"{template_id}: unsubstituted placeholder"
        if not spans:
            assert rendered == packaged, f"{template_id}: binding-free template was altered"
    report(
        "prompt-fidelity",
        "7 packaged templates byte-match their golden copies and render "
        "changes only at placeholder sites",
    )


# --- quizzes -------------------------------------------------------------------


def test_quiz_bank_contract(pipeline_bundle, tmp_path):
    bundles = [pipeline_bundle, reference_bundle(tmp_path / "ref")]
    items_checked = 0
    for bundle in bundles:
        for section in bundle.sections:
            assert sorted(section.quizzes) == [1, 2, 3, 4, 5], (
                f"{bundle.id}/{section.id}: levels {sorted(section.quizzes)}"
            )
            for level, items in section.quizzes.items():
                assert items, f"{bundle.id}/{section.id}: empty bank at level {level}"
                for item in items:
                    assert validate_quiz_item(item.to_dict()) == item
                    assert item.type in QUIZ_TYPES
                    if item.type == "multiple-choice":
                        assert len(item.options) == 4
                        assert item.correct_answer in item.options
                    items_checked += 1
    report(
        "quiz-bank-contract",
        f"{items_checked} items across {sum(len(b.sections) for b in bundles)} sections: "
        "all 5 levels present, every item valid, every multiple-choice has "
        "4 options containing the answer",
    )


# --- breaks --------------------------------------------------------------------


def test_break_budget():
    gateway = Gateway(MockProvider())
    measured = {}
    for minutes in (1, 3, 5):
        story = gateway.complete(
            "breakStory",
            {
                "currentVideoName": "Atoms and Forces",
                "breakDuration": minutes,
                "userInterests": "chess",
                "summaryText": "The story so far.",
                "currentSlideContent": "Slide text.",
            },
        ).value
        words = len(str(story).split())
        target = minutes * 150
        assert abs(words - target) <= 0.2 * target, (
            f"{minutes} min story has {words} words, target {target} +-20%"
        )
        measured[minutes] = words
    report(
        "break-budget",
        f"story lengths {measured} words for 1/3/5 min, all within 20% of 150/450/750",
    )


# --- live session --------------------------------------------------------------


def test_session_model_check(tmp_path):
    total = 0
    pauses = resumes = 0
    for seed in (11, 42, 2026):
        walk = run_model_walk(tmp_path / f"walk-{seed}", steps=4000, seed=seed)
        assert_walk_invariants(walk)
        total += 4000
        pauses += len(walk["clarify_pauses"])
        resumes += len(walk["clarify_resumes"])
    assert total >= 10_000
    report(
        "session-model-check",
        f"{total} random steps across 3 seeds: transitions all declared, "
        f"{pauses} clarification pauses matched by {resumes} resumes, "
        "summary covers the log exactly",
    )


# --- whole system ----------------------------------------------------------------


def _free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


def _wait_ready(client, base: str, deadline: float) -> None:
    while time.monotonic() < deadline:
        try:
            if client.get(base + "/").status_code == 200:
                return
        except Exception:
            time.sleep(0.25)
    raise AssertionError("server never became ready")


def _wait_mode(client, base: str, sid: str, mode: str, timeout: float = 20.0) -> None:
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        if client.get(f"{base}/sessions/{sid}").json()["mode"] == mode:
            return
        time.sleep(0.1)
    raise AssertionError(f"session never reached {mode}")


def test_full_offline_run(offline_lecture, tmp_path, monkeypatch):
    import httpx

    # client-side egress guard; the server subprocess gets poisoned proxies
    # and no provider credentials, so any outbound call would fail loudly
    real = socket.getaddrinfo

    def guarded(host, *args, **kwargs):
        if host not in ("localhost", "127.0.0.1", "::1", None, ""):
            raise AssertionError(f"unexpected network lookup for {host!r}")
        return real(host, *args, **kwargs)

    monkeypatch.setattr(socket, "getaddrinfo", guarded)

    t0 = time.perf_counter()
    bundles_dir = tmp_path / "bundles"
    env = {
        "PATH": "/usr/bin:/bin:/usr/local/bin",
        "HOME": str(tmp_path),
        "LLM_MOCK": "1",
        "MEDIA_MOCK": "1",
        "http_proxy": "http://127.0.0.1:9",
        "https_proxy": "http://127.0.0.1:9",
        "no_proxy": "",
    }

    preprocess = subprocess.run(
        [
            sys.executable,
            "-m",
            "lecturekit.service.cli",
            "preprocess",
            "--mock",
            "--video",
            str(offline_lecture["video"]),
            "--transcript",
            str(offline_lecture["transcript"]),
            "--examples",
            str(offline_lecture["examples"]),
            "--out",
            str(bundles_dir / "lecture"),
        ],
        capture_output=True,
        text=True,
        env=env,
        timeout=60,
    )
    assert preprocess.returncode == 0, preprocess.stderr

    port = _free_port()
    base = f"http://127.0.0.1:{port}"
    server = subprocess.Popen(
        [
            sys.executable,
            "-m",
            "lecturekit.service.cli",
            "serve",
            "--mock",
            "--bundle-dir",
            str(bundles_dir),
            "--port",
            str(port),
        ],
        stdout=subprocess.PIPE,
        stderr=subprocess.PIPE,
        env=env,
    )
    try:
        with httpx.Client(timeout=5.0, trust_env=False) as client:
            _wait_ready(client, base, time.monotonic() + 30)

            lectures = client.get(base + "/lectures").json()
            assert len(lectures) == 1
            lecture_id = lectures[0]["id"]

            manifest = client.get(f"{base}/lectures/{lecture_id}/manifest").json()
            assert manifest["id"] == lecture_id
            slide = client.get(f"{base}/lectures/{lecture_id}/sections/0/slide.png")
            assert slide.status_code == 200 and slide.content.startswith(b"\x89PNG")
            example_page = client.get(f"{base}/lectures/{lecture_id}/examples/orbitals@12.html")
            assert example_page.status_code == 200
            assert client.get(f"{base}/lectures/{lecture_id}/video").status_code in (200, 404)

            created = client.post(
                base + "/sessions",
                json={"bundleId": lecture_id, "interests": ["chess"]},
            )
            assert created.status_code == 201
            sid = created.json()["sessionId"]
            assert client.get(f"{base}/sessions/{sid}").status_code == 200

            clarified = client.post(
                f"{base}/sessions/{sid}/clarify",
                json={"areaRect": [0.1, 0.1, 0.5, 0.5], "question": "What is this?"},
            )
            assert clarified.status_code == 200 and clarified.json()["text"]
            _wait_mode(client, base, sid, "Playing")

            visual = client.post(
                f"{base}/sessions/{sid}/visual", json={"areaRect": [0.1, 0.1, 0.5, 0.5]}
            )
            assert visual.status_code in (200, 404)  # blank crops report empty results
            if visual.status_code == 200:
                assert visual.json()["results"]
                assert client.post(f"{base}/sessions/{sid}/visual/dismiss").status_code == 200

            quiz = client.post(f"{base}/sessions/{sid}/quiz/next", json={}).json()
            graded = client.post(
                f"{base}/sessions/{sid}/quiz/answer",
                json={"answer": quiz["item"]["correctAnswer"]},
            ).json()
            assert graded["correct"] is True

            assert client.post(
                f"{base}/sessions/{sid}/difficulty", json={"level": 4}
            ).json() == {"difficulty": 4}

            broke = client.post(f"{base}/sessions/{sid}/break", json={"minutes": 1})
            assert broke.status_code == 200
            _wait_mode(client, base, sid, "Playing")

            toggled = client.post(
                f"{base}/sessions/{sid}/highlight", json={"enabled": True}
            )
            assert toggled.status_code == 200

            moved = client.post(f"{base}/sessions/{sid}/position", json={"tSec": 30.0})
            assert moved.status_code == 200
            if client.get(f"{base}/sessions/{sid}").json()["mode"] == "ExampleActive":
                assert client.post(f"{base}/sessions/{sid}/example/close").status_code == 200

            note = client.post(f"{base}/sessions/{sid}/note", json={"text": "check this"})
            assert note.status_code == 200
            replayed = client.post(f"{base}/sessions/{sid}/replay", json={"recordIndex": 0})
            assert replayed.status_code == 200

            opened = client.post(f"{base}/sessions/{sid}/example/open", json={"index": 0})
            assert opened.status_code == 200
            assert client.post(f"{base}/sessions/{sid}/example/close").status_code == 200

            assert client.post(f"{base}/sessions/{sid}/summary/open").status_code == 200
            assert client.post(f"{base}/sessions/{sid}/summary/close").status_code == 200

            document = client.get(f"{base}/sessions/{sid}/summary").json()
            assert document["sessionId"] == sid
            assert document["canvas"]

            stream = client.get(
                f"{base}/sessions/{sid}/events",
                params={"after": 0, "idle_timeout_sec": 0.5},
            )
            assert stream.status_code == 200
            seqs, shows, hides = [], [], []
            for frame in stream.text.split("\n\n"):
                lines = [ln for ln in frame.splitlines() if ln and not ln.startswith(":")]
                if not lines:
                    continue
                fields = dict(ln.split(": ", 1) for ln in lines)
                event = json.loads(fields["data"])
                seqs.append(event["seq"])
                if event["kind"] == "overlayShow":
                    shows.append(event["payload"]["overlayId"])
                if event["kind"] == "overlayHide":
                    hides.append(event["payload"]["overlayId"])
            assert seqs == sorted(seqs) and len(set(seqs)) == len(seqs)
            assert sorted(shows) == sorted(hides)
    finally:
        server.terminate()
        try:
            server.wait(timeout=10)
        except subprocess.TimeoutExpired:
            server.kill()

    elapsed = time.perf_counter() - t0
    assert elapsed < 120.0, f"offline run took {elapsed:.0f}s"
    report(
        "full-offline-run",
        f"preprocess + serve + scripted client covered every endpoint "
        f"in {elapsed:.0f}s with loopback-only traffic",
    )
