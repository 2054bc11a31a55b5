"""Live-session state machine over a lecture bundle.

One LectureSession owns one learner's viewing state: playback position,
interaction mode, difficulty slider, interests, highlight toggle and the
append-only interaction log. All state changes go through the operations
below, every mode change is checked against the declared transition
table, and every externally visible effect is emitted as an ordered
event (overlay show/hide, speech status, highlight set, quiz and example
prompts, resumes, break start/end).

Pauses caused by clarifications auto-resume: the answer is planned onto a
free slide region, spoken through the speech channel, and the overlay is
cleared plus exactly one resume event emitted when the speech job reaches
a terminal state - including the degraded text-only path and provider
failures, which surface an apologetic overlay instead of blocking.
"""

from __future__ import annotations

import itertools
import tempfile
import threading
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

from ..bundle import ExampleAsset, HighlightEntry, LectureBundle, QuizItem, Section
from ..errors import (
    EmptyBankLevel,
    GatewayError,
    IllegalTransition,
    MediaError,
    PreconditionFailed,
)
from ..gateway import Gateway
from ..imaging import crop_region
from ..layout import OverlayPlan, plan_overlay
from ..media import (
    ImageResult,
    ImageSearchProvider,
    ManualClock,
    SpeechChannel,
    SpeechJob,
    SpeechProvider,
    StubImageSearch,
    StubSpeechProvider,
    search_images,
)
from ..media.clock import Clock
from ..media.speech import TERMINAL
from .records import InteractionLog, InteractionRecord

# Interaction modes.
PLAYING = "Playing"
CLARIFYING = "Clarifying"
VISUAL_SHOWN = "VisualShown"
QUIZ_ACTIVE = "QuizActive"
ON_BREAK = "OnBreak"
SUMMARY_VIEW = "SummaryView"
EXAMPLE_ACTIVE = "ExampleActive"

MODES = (
    PLAYING,
    CLARIFYING,
    VISUAL_SHOWN,
    QUIZ_ACTIVE,
    ON_BREAK,
    SUMMARY_VIEW,
    EXAMPLE_ACTIVE,
)

# Declared reachable-mode graph; _set_mode refuses anything outside it.
TRANSITIONS: dict[str, frozenset[str]] = {
    PLAYING: frozenset(
        {CLARIFYING, VISUAL_SHOWN, QUIZ_ACTIVE, ON_BREAK, SUMMARY_VIEW, EXAMPLE_ACTIVE}
    ),
    CLARIFYING: frozenset({PLAYING, VISUAL_SHOWN}),
    VISUAL_SHOWN: frozenset({PLAYING, CLARIFYING, QUIZ_ACTIVE, SUMMARY_VIEW, EXAMPLE_ACTIVE}),
    QUIZ_ACTIVE: frozenset({PLAYING, CLARIFYING, VISUAL_SHOWN}),
    ON_BREAK: frozenset({PLAYING}),
    SUMMARY_VIEW: frozenset({PLAYING, VISUAL_SHOWN}),
    EXAMPLE_ACTIVE: frozenset({PLAYING, VISUAL_SHOWN}),
}

EVENT_KINDS = (
    "overlayShow",
    "overlayHide",
    "speechStatus",
    "highlightSet",
    "quizPrompt",
    "examplePrompt",
    "resume",
    "breakStart",
    "breakEnd",
)

DEFAULT_QUESTION = "Please explain this."
APOLOGY_TEXT = (
    "Sorry, I could not reach the tutoring service just now. "
    "The lecture will continue; please try asking again in a moment."
)
ANALOGY_TRIGGERS = ("analogy", "analogies", "like i'm", "like im")
STEP_TRIGGER = "step by step"
CLARIFY_WORD_LIMIT = 50
BREAK_CHOICES = (1, 3, 5)

EmitCallback = Callable[[str, dict], None]
Rect = tuple[float, float, float, float]


class LectureSession:
    """Single-writer session engine; all operations serialize on one lock."""

    def __init__(
        self,
        session_id: str,
        bundle: LectureBundle,
        gateway: Gateway,
        clock: Optional[Clock] = None,
        *,
        speech_provider: Optional[SpeechProvider] = None,
        image_provider: Optional[ImageSearchProvider] = None,
        interests: Sequence[str] = (),
        difficulty: int = 3,
        log_path: str | Path | None = None,
        emit: Optional[EmitCallback] = None,
        voice_id: str = "default",
        avatar_region: Optional[Rect] = None,
    ) -> None:
        self.session_id = session_id
        self.bundle = bundle
        self.gateway = gateway
        self.clock: Clock = clock if clock is not None else ManualClock()
        self.speech = SpeechChannel(speech_provider or StubSpeechProvider(), self.clock)
        self.images: ImageSearchProvider = image_provider or StubImageSearch()
        self.interests = [s for s in (i.strip() for i in interests) if s]
        self.difficulty = int(difficulty)
        if not 1 <= self.difficulty <= 5:
            raise PreconditionFailed(f"difficulty {difficulty} outside 1..5")
        self.voice_id = voice_id
        self.avatar_region = avatar_region
        self.log = InteractionLog(log_path)
        self.mode = PLAYING
        self.position_sec = 0.0
        self.highlight_enabled = True
        self._emit_cb: EmitCallback = emit or (lambda kind, payload: None)
        self._lock = threading.RLock()
        self._overlay_ids = itertools.count(1)
        self._active_overlay: Optional[int] = None
        self._visual_overlay: Optional[int] = None
        self._visual_return_mode: str = PLAYING
        self._active_quiz: Optional[tuple[Section, int, int, QuizItem]] = None
        self._serve_tick = 0
        self._last_served: dict[tuple[str, int, int], int] = {}
        self._fired_examples: set[int] = set()
        self._last_highlight_key: Optional[tuple] = None
        # Terminal handlers keyed by speech job id. The channel reports a
        # preempted job's failure through whichever callback is current, so
        # dispatch must go by job identity, not by closure.
        self._speech_terminal: dict[int, Callable[[SpeechJob], None]] = {}

    # --- plumbing -----------------------------------------------------------

    def _emit(self, kind: str, payload: dict) -> None:
        self._emit_cb(kind, payload)

    def _set_mode(self, to: str, op: str) -> None:
        if to == self.mode:
            return
        if to not in TRANSITIONS[self.mode]:
            raise IllegalTransition(self.mode, op)
        self.mode = to

    def _require_mode(self, op: str, *allowed: str) -> None:
        if self.mode not in allowed:
            raise IllegalTransition(self.mode, op)

    def _record(
        self,
        kind: str,
        *,
        selected_area: Optional[Rect] = None,
        prompt: Optional[str] = None,
        response: Optional[str] = None,
        extra: Optional[dict[str, Any]] = None,
    ) -> InteractionRecord:
        record = InteractionRecord(
            kind=kind,
            video_sec=self.position_sec,
            wall_sec=self.clock.now(),
            selected_area=selected_area,
            prompt=prompt,
            response=response,
            extra=extra or {},
        )
        self.log.append(record)
        return record

    def _current_section(self) -> Section:
        section = self.bundle.section_at(self.position_sec)
        if section is None:
            raise PreconditionFailed("bundle has no sections")
        return section

    def _on_speech_status(self, job: SpeechJob, status: str) -> None:
        with self._lock:
            self._emit(
                "speechStatus",
                {
                    "jobId": job.job_id,
                    "status": status,
                    "degraded": job.degraded,
                    "estimatedDurationSec": job.estimated_duration_sec,
                },
            )
            handler = None
            if status in TERMINAL:
                handler = self._speech_terminal.pop(job.job_id, None)
            if handler is not None:
                handler(job)

    def _speak(
        self, text: str, on_terminal: Optional[Callable[[SpeechJob], None]] = None
    ) -> SpeechJob:
        job = self.speech.speak(text, self.voice_id, self._on_speech_status)
        if on_terminal is not None:
            if job.terminal:
                on_terminal(job)
            else:
                self._speech_terminal[job.job_id] = on_terminal
        return job

    # --- clarification (and its personalized variants) ------------------------

    def ask_clarification(
        self,
        selected_area: Optional[Rect] = None,
        question: str = DEFAULT_QUESTION,
    ) -> tuple[str, OverlayPlan, SpeechJob]:
        """Pause, answer a question about the current slide, speak, resume."""
        with self._lock:
            self._require_mode("clarify", PLAYING, QUIZ_ACTIVE)
            question = question.strip() or DEFAULT_QUESTION
            section = self._current_section()
            if self.mode == QUIZ_ACTIVE:
                self._active_quiz = None
            self._set_mode(CLARIFYING, "clarify")

            lowered = question.casefold()
            wants_steps = STEP_TRIGGER in lowered
            wants_analogy = any(t in lowered for t in ANALOGY_TRIGGERS)
            extra: dict[str, Any] = {}
            if wants_steps and not wants_analogy:
                extra["personalized"] = "steps"
            elif wants_analogy:
                extra["personalized"] = "analogy"
                if not self.interests:
                    extra["interestsMissing"] = True

            parts = [question]
            if selected_area is not None:
                x0, y0, x1, y1 = selected_area
                parts.append(
                    "The student selected the slide region from "
                    f"({x0:.3f}, {y0:.3f}) to ({x1:.3f}, {y1:.3f}) in normalized "
                    "coordinates; focus on its content."
                )
            if wants_analogy and self.interests:
                parts.append(
                    "Please relate the explanation to the student's interest in "
                    f"{', '.join(self.interests)}."
                )
            user_text = "\n".join(parts)

            bindings = {
                "currentVideoName": self.bundle.title,
                "summaryText": self.bundle.summary_text() or None,
                "currentSlideContent": section.content_text(),
            }
            try:
                result = self.gateway.complete(
                    "clarify", bindings, user_text=user_text, model_tier="reasoning"
                )
                response_text = str(result.value)
            except GatewayError as exc:
                response_text = APOLOGY_TEXT
                extra["gatewayError"] = exc.code

            words = len(response_text.split())
            extra["lengthViolation"] = words > CLARIFY_WORD_LIMIT

            anchor = (0.5, 0.5)
            if selected_area is not None:
                anchor = (
                    (selected_area[0] + selected_area[2]) / 2,
                    (selected_area[1] + selected_area[3]) / 2,
                )
            blocked = (self.avatar_region,) if self.avatar_region else ()
            plan = plan_overlay(
                str(self.bundle.resolve(section.slide_image_ref)),
                anchor,
                response_text,
                extra_boxes=blocked,
            )

            overlay_id = next(self._overlay_ids)
            self._active_overlay = overlay_id
            self._emit(
                "overlayShow",
                {
                    "overlayId": overlay_id,
                    "kind": "clarify",
                    "plan": plan.to_json(),
                    "text": response_text,
                },
            )
            extra["overlayId"] = overlay_id
            self._record(
                "question",
                selected_area=selected_area,
                prompt=question,
                response=response_text,
                extra=extra,
            )

            def finish(_job: SpeechJob) -> None:
                if self._active_overlay != overlay_id:
                    return
                self._active_overlay = None
                self._emit("overlayHide", {"overlayId": overlay_id})
                if self.mode == CLARIFYING:
                    self._set_mode(PLAYING, "clarify-resume")
                elif self._visual_return_mode == CLARIFYING:
                    # Speech ended under a stacked visual overlay; dismissing
                    # it must not revive the already-finished clarification.
                    self._visual_return_mode = PLAYING
                self._emit("resume", {"after": "clarify", "overlayId": overlay_id})

            job = self._speak(response_text, finish)
            return response_text, plan, job

    def personalize_explanation(
        self,
        selected_area: Optional[Rect],
        question: str,
    ) -> tuple[str, OverlayPlan, SpeechJob]:
        """Clarification that must carry an analogy or step-by-step trigger."""
        lowered = question.casefold()
        if STEP_TRIGGER not in lowered and not any(t in lowered for t in ANALOGY_TRIGGERS):
            raise PreconditionFailed(
                "personalized explanation needs an analogy or step-by-step request"
            )
        return self.ask_clarification(selected_area, question)

    # --- visual retrieval -----------------------------------------------------

    def request_visual(self, selected_area: Rect, max_results: int = 6) -> list[ImageResult]:
        """Crop the selected area, extract keywords, search for images."""
        with self._lock:
            self._require_mode(
                "visual", PLAYING, CLARIFYING, QUIZ_ACTIVE, SUMMARY_VIEW, EXAMPLE_ACTIVE
            )
            section = self._current_section()
            slide = self.bundle.resolve(section.slide_image_ref)
            with tempfile.TemporaryDirectory(prefix="lecturekit-crop-") as tmp:
                crop = crop_region(slide, selected_area, Path(tmp) / "crop.png")
                result = self.gateway.complete(
                    "visualKeywords", {}, attachments=(crop,), model_tier="fast"
                )
            keywords = str(result.value["keywords"]).strip()
            try:
                images = search_images(self.images, keywords, max_results)
            except MediaError as exc:
                self._record(
                    "visualRequest",
                    selected_area=selected_area,
                    prompt=keywords,
                    extra={"error": exc.code},
                )
                raise
            self._record(
                "visualRequest",
                selected_area=selected_area,
                prompt=keywords,
                response=images[0].url if images else None,
                extra={"resultCount": len(images)},
            )
            self._visual_return_mode = self.mode
            self._set_mode(VISUAL_SHOWN, "visual")
            overlay_id = next(self._overlay_ids)
            self._visual_overlay = overlay_id
            self._emit(
                "overlayShow",
                {
                    "overlayId": overlay_id,
                    "kind": "visual",
                    "keywords": keywords,
                    "results": [img.to_json() for img in images],
                },
            )
            return images

    def dismiss_visual(self) -> None:
        with self._lock:
            self._require_mode("visual-dismiss", VISUAL_SHOWN)
            if self._visual_overlay is not None:
                self._emit("overlayHide", {"overlayId": self._visual_overlay})
                self._visual_overlay = None
            self._set_mode(self._visual_return_mode, "visual-dismiss")
            self._visual_return_mode = PLAYING

    # --- quizzes ----------------------------------------------------------------

    def set_difficulty(self, level: int) -> None:
        if not isinstance(level, int) or isinstance(level, bool) or not 1 <= level <= 5:
            raise PreconditionFailed(f"difficulty must be an integer in 1..5, got {level!r}")
        with self._lock:
            self.difficulty = level

    def serve_quiz(self, section_id: Optional[str] = None) -> QuizItem:
        """Serve the least-recently-served item at the session difficulty."""
        with self._lock:
            self._require_mode("quiz", PLAYING)
            if section_id is None:
                section = self._current_section()
            else:
                found = self.bundle.section_by_id(section_id)
                if found is None:
                    raise PreconditionFailed(f"unknown section {section_id!r}")
                section = found

            level, items = self._pick_level(section)
            index = min(
                range(len(items)),
                key=lambda i: (self._last_served.get((section.id, level, i), -1), i),
            )
            self._serve_tick += 1
            self._last_served[(section.id, level, index)] = self._serve_tick
            item = items[index]
            self._active_quiz = (section, level, index, item)
            self._set_mode(QUIZ_ACTIVE, "quiz")
            self._emit(
                "quizPrompt",
                {
                    "sectionId": section.id,
                    "level": level,
                    "levelFallback": level != self.difficulty,
                    "item": item.to_dict(),
                },
            )
            return item

    def _pick_level(self, section: Section) -> tuple[int, list[QuizItem]]:
        """The requested difficulty, or the nearest populated level below-first."""
        want = self.difficulty
        candidates = [want]
        for delta in range(1, 5):
            candidates.extend([want - delta, want + delta])
        for level in candidates:
            if 1 <= level <= 5 and section.quizzes.get(level):
                return level, section.quizzes[level]
        raise EmptyBankLevel(f"section {section.id} has no quiz items at any level")

    def answer_quiz(self, answer: str) -> tuple[bool, str]:
        """Check an answer with trim/case-fold normalization, then resume."""
        with self._lock:
            self._require_mode("quiz-answer", QUIZ_ACTIVE)
            if self._active_quiz is None:
                raise PreconditionFailed("no quiz item is active")
            section, level, _index, item = self._active_quiz
            correct = _answers_match(item, answer)
            self._active_quiz = None
            self._record(
                "quizAnswer",
                prompt=item.question,
                response=answer,
                extra={
                    "correct": correct,
                    "sectionId": section.id,
                    "level": level,
                    "expected": item.correct_answer,
                },
            )
            self._set_mode(PLAYING, "quiz-answer")
            self._emit("resume", {"after": "quiz", "correct": correct})
            return correct, item.explanation

    # --- breaks -------------------------------------------------------------------

    def start_break(self, minutes: int) -> tuple[str, SpeechJob]:
        """Tell an interest-tailored story sized to the chosen break length."""
        with self._lock:
            self._require_mode("break", PLAYING)
            if minutes not in BREAK_CHOICES:
                raise PreconditionFailed(
                    f"break length must be one of {BREAK_CHOICES}, got {minutes!r}"
                )
            section = self._current_section()
            bindings = {
                "currentVideoName": self.bundle.title,
                "breakDuration": minutes,
                "summaryText": self.bundle.summary_text(),
                "currentSlideContent": section.content_text(),
                "userInterests": self.interests or ["everyday life"],
            }
            story = str(
                self.gateway.complete("breakStory", bindings, model_tier="reasoning").value
            )
            self._set_mode(ON_BREAK, "break")
            self._record("breakTaken", response=story, extra={"minutes": minutes})
            self._emit("breakStart", {"minutes": minutes, "story": story})

            # The break ends when both the wall timer and the story are done.
            state = {"timer": False, "story": False, "ended": False}

            def maybe_end() -> None:
                with self._lock:
                    if state["ended"] or not (state["timer"] and state["story"]):
                        return
                    state["ended"] = True
                    if self.mode == ON_BREAK:
                        self._set_mode(PLAYING, "break-end")
                    self._emit("breakEnd", {"minutes": minutes})
                    self._emit("resume", {"after": "break"})

            def timer_done() -> None:
                state["timer"] = True
                maybe_end()

            def story_done(_job: SpeechJob) -> None:
                state["story"] = True
                maybe_end()

            self.clock.schedule(minutes * 60.0, timer_done)
            job = self._speak(story, story_done)
            return story, job

    # --- highlights -----------------------------------------------------------------

    def set_highlight_enabled(self, enabled: bool) -> None:
        with self._lock:
            self.highlight_enabled = bool(enabled)
            self._emit_highlights(force=True)

    def active_highlights(self, t_sec: Optional[float] = None) -> list[HighlightEntry]:
        """Highlight entries of the current section active at ``t_sec``."""
        t = self.position_sec if t_sec is None else t_sec
        if not self.highlight_enabled:
            return []
        section = self.bundle.section_at(t)
        if section is None:
            return []
        return [entry for entry in section.highlights if entry.covers(t)]

    def _emit_highlights(self, force: bool = False) -> None:
        active = self.active_highlights()
        key = (self.highlight_enabled, tuple(id(e) for e in active))
        if force or key != self._last_highlight_key:
            self._last_highlight_key = key
            self._emit(
                "highlightSet",
                {
                    "enabled": self.highlight_enabled,
                    "boxes": [entry.to_dict() for entry in active],
                },
            )

    # --- position, examples, summary -------------------------------------------------

    def set_position(self, t_sec: float) -> dict:
        """Advance/seek playback; fire quiz prompts and example triggers."""
        with self._lock:
            self._require_mode("position", PLAYING, VISUAL_SHOWN)
            prev = self.position_sec
            t = min(max(0.0, float(t_sec)), self.bundle.duration_sec)
            self.position_sec = t

            quiz_prompts: list[str] = []
            if t > prev:
                for section in self.bundle.sections:
                    if prev < section.end_sec <= t and section.end_sec < self.bundle.duration_sec:
                        quiz_prompts.append(section.id)
                        self._emit(
                            "quizPrompt", {"sectionId": section.id, "dueAt": section.end_sec}
                        )

            example: Optional[ExampleAsset] = None
            if self.mode == PLAYING and t > prev:
                for idx, asset in enumerate(self.bundle.examples):
                    if idx in self._fired_examples:
                        continue
                    if prev < asset.trigger_sec <= t:
                        self._fired_examples.add(idx)
                        example = asset
                        self._set_mode(EXAMPLE_ACTIVE, "example-trigger")
                        self._record(
                            "exampleOpened",
                            response=asset.html_ref,
                            extra={"manual": False, "title": asset.title},
                        )
                        self._emit("examplePrompt", {"asset": asset.to_dict(), "manual": False})
                        break

            self._emit_highlights()
            return {
                "positionSec": self.position_sec,
                "quizPrompts": quiz_prompts,
                "example": None if example is None else example.to_dict(),
            }

    def open_example(self, index: int) -> ExampleAsset:
        """Manually open a registered example; exempt from the once-only rule."""
        with self._lock:
            self._require_mode("example-open", PLAYING)
            if not 0 <= index < len(self.bundle.examples):
                raise PreconditionFailed(f"no example at index {index}")
            asset = self.bundle.examples[index]
            self._set_mode(EXAMPLE_ACTIVE, "example-open")
            self._record(
                "exampleOpened",
                response=asset.html_ref,
                extra={"manual": True, "title": asset.title},
            )
            self._emit("examplePrompt", {"asset": asset.to_dict(), "manual": True})
            return asset

    def close_example(self) -> None:
        with self._lock:
            self._require_mode("example-close", EXAMPLE_ACTIVE)
            self._set_mode(PLAYING, "example-close")
            self._emit("resume", {"after": "example"})

    def open_summary(self) -> None:
        with self._lock:
            self._require_mode("summary-open", PLAYING)
            self._set_mode(SUMMARY_VIEW, "summary-open")

    def close_summary(self) -> None:
        with self._lock:
            self._require_mode("summary-close", SUMMARY_VIEW)
            self._set_mode(PLAYING, "summary-close")
            self._emit("resume", {"after": "summary"})

    def add_note(self, text: str, selected_area: Optional[Rect] = None) -> InteractionRecord:
        if not text.strip():
            raise PreconditionFailed("note text must be non-empty")
        with self._lock:
            return self._record("note", selected_area=selected_area, response=text.strip())

    def replay_text(self, record_index: int) -> SpeechJob:
        """Re-speak the stored response of a logged interaction."""
        with self._lock:
            if self.mode == ON_BREAK:
                raise IllegalTransition(self.mode, "replay")
            records = self.log.records
            if not 0 <= record_index < len(records):
                raise PreconditionFailed(f"no record at index {record_index}")
            text = records[record_index].response
            if not text:
                raise PreconditionFailed("record has no replayable text")
            return self._speak(text)

    def build_summary(self):
        from ..summary import compile_summary

        return compile_summary(self.log.records, self.bundle, session_id=self.session_id)

    def snapshot(self) -> dict:
        return {
            "sessionId": self.session_id,
            "bundleId": self.bundle.id,
            "positionSec": self.position_sec,
            "mode": self.mode,
            "difficulty": self.difficulty,
            "interests": list(self.interests),
            "highlightEnabled": self.highlight_enabled,
            "recordCount": len(self.log),
        }


def _answers_match(item: QuizItem, answer: str) -> bool:
    given = answer.strip().casefold()
    if given == item.correct_answer.strip().casefold():
        return True
    if item.type == "fill-blank":
        return any(given == syn.strip().casefold() for syn in item.answer_synonyms)
    return False
