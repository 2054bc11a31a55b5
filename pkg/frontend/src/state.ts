// Pure view-state reducers. The UI is a pure client: every field here comes
// from a server ack (session snapshot) or a stream event, never from local
// guesses. applyEvent/applySnapshot return fresh objects without mutating
// their inputs, so folding the same event list twice yields identical views.

import type {
  ExampleAsset,
  HighlightEntry,
  ImageResult,
  OverlayPlan,
  QuizItem,
  SessionEvent,
  SessionSnapshot,
  SpeechStatus,
  SpeechStatusPayload,
} from "./types";

// Reveal pacing when the speech channel is degraded (text-only mode); the
// one case where a local pace is allowed instead of speechStatus timing.
export const DEGRADED_CHARS_PER_SEC = 30;

// Progressive-reveal bookkeeping for one clarify overlay. Timing fields are
// stream-arrival timestamps supplied by the caller, so a replay that feeds
// synthetic timestamps is fully deterministic.
export type RevealState = {
  jobId: number | null;
  status: SpeechStatus | "pending";
  degraded: boolean;
  durationMs: number;
  startedAtMs: number | null;
  shownAtMs: number;
};

export type ClarifyOverlay = {
  kind: "clarify";
  overlayId: number;
  plan: OverlayPlan;
  text: string;
  reveal: RevealState;
};

export type VisualOverlay = {
  kind: "visual";
  overlayId: number;
  keywords: string;
  results: ImageResult[];
};

export type ActiveOverlay = ClarifyOverlay | VisualOverlay;

export type ActiveQuizState = {
  sectionId: string;
  level: number;
  levelFallback: boolean;
  item: QuizItem;
  // Filled from the /quiz/answer ack.
  answered: { answer: string; correct: boolean; explanation: string } | null;
};

export type BreakState = { minutes: number; story: string };

export type ExampleState = { asset: ExampleAsset; manual: boolean };

export type SessionView = {
  session: SessionSnapshot | null;
  overlays: ActiveOverlay[];
  highlight: { enabled: boolean; boxes: HighlightEntry[] };
  quiz: ActiveQuizState | null;
  quizDue: string[];
  breakState: BreakState | null;
  example: ExampleState | null;
  speech: SpeechStatusPayload | null;
  playing: boolean;
  summaryOpen: boolean;
  lastSeq: number;
};

export function initialView(): SessionView {
  return {
    session: null,
    overlays: [],
    highlight: { enabled: false, boxes: [] },
    quiz: null,
    quizDue: [],
    breakState: null,
    example: null,
    speech: null,
    playing: false,
    summaryOpen: false,
    lastSeq: 0,
  };
}

// Ack reducer: the authoritative snapshot after any state-changing request.
export function applySnapshot(view: SessionView, snap: SessionSnapshot): SessionView {
  return {
    ...view,
    session: snap,
    playing: snap.mode === "Playing",
    summaryOpen: snap.mode === "SummaryView",
  };
}

// Ack reducer for the /quiz/answer response.
export function applyQuizAnswer(
  view: SessionView,
  answer: string,
  ack: { correct: boolean; explanation: string },
): SessionView {
  if (!view.quiz) return view;
  return { ...view, quiz: { ...view.quiz, answered: { answer, ...ack } } };
}

function bindSpeech(
  overlays: ActiveOverlay[],
  payload: SpeechStatusPayload,
  atMs: number,
): { overlays: ActiveOverlay[]; bound: boolean } {
  let bound = false;
  const next = overlays.map((overlay): ActiveOverlay => {
    if (overlay.kind !== "clarify" || bound) return overlay;
    const owns =
      overlay.reveal.jobId === payload.jobId ||
      (overlay.reveal.jobId === null && payload.status === "queued");
    if (!owns) return overlay;
    bound = true;
    return {
      ...overlay,
      reveal: {
        ...overlay.reveal,
        jobId: payload.jobId,
        status: payload.status,
        degraded: payload.degraded,
        durationMs: payload.estimatedDurationSec * 1000,
        startedAtMs:
          payload.status === "speaking" ? atMs : overlay.reveal.startedAtMs,
      },
    };
  });
  return { overlays: next, bound };
}

// Event reducer. atMs is the arrival timestamp of the event (wall clock in
// live mode, synthetic in replay); it only feeds reveal pacing.
export function applyEvent(view: SessionView, event: SessionEvent, atMs: number): SessionView {
  if (event.seq <= view.lastSeq) return view; // replayed duplicate
  const base: SessionView = { ...view, lastSeq: event.seq };

  switch (event.kind) {
    case "overlayShow": {
      const p = event.payload;
      const overlay: ActiveOverlay =
        p.kind === "clarify"
          ? {
              kind: "clarify",
              overlayId: p.overlayId,
              plan: p.plan,
              text: p.text,
              reveal: {
                jobId: null,
                status: "pending",
                degraded: false,
                durationMs: 0,
                startedAtMs: null,
                shownAtMs: atMs,
              },
            }
          : {
              kind: "visual",
              overlayId: p.overlayId,
              keywords: p.keywords,
              results: p.results,
            };
      return { ...base, overlays: [...view.overlays, overlay], playing: false };
    }
    case "overlayHide":
      return {
        ...base,
        overlays: view.overlays.filter((o) => o.overlayId !== event.payload.overlayId),
      };
    case "speechStatus": {
      const { overlays } = bindSpeech(view.overlays, event.payload, atMs);
      return { ...base, overlays, speech: event.payload };
    }
    case "highlightSet":
      return { ...base, highlight: { enabled: event.payload.enabled, boxes: event.payload.boxes } };
    case "quizPrompt": {
      const p = event.payload;
      if ("item" in p) {
        return {
          ...base,
          playing: false,
          quiz: {
            sectionId: p.sectionId,
            level: p.level,
            levelFallback: p.levelFallback,
            item: p.item,
            answered: null,
          },
          quizDue: view.quizDue.filter((id) => id !== p.sectionId),
        };
      }
      return view.quizDue.includes(p.sectionId)
        ? base
        : { ...base, quizDue: [...view.quizDue, p.sectionId] };
    }
    case "examplePrompt":
      return { ...base, playing: false, example: event.payload };
    case "breakStart":
      return { ...base, playing: false, breakState: event.payload };
    case "breakEnd":
      return { ...base, breakState: null };
    case "resume": {
      const next: SessionView = { ...base, playing: true };
      switch (event.payload.after) {
        case "quiz":
          next.quiz = null;
          break;
        case "break":
          next.breakState = null;
          break;
        case "example":
          next.example = null;
          break;
        case "summary":
          next.summaryOpen = false;
          break;
      }
      return next;
    }
  }
}

export function applyEvents(
  view: SessionView,
  events: readonly SessionEvent[],
  atMsFor: (event: SessionEvent) => number,
): SessionView {
  return events.reduce((acc, event) => applyEvent(acc, event, atMsFor(event)), view);
}

// Character count visible at nowMs under the reveal schedule. Duration comes
// from speechStatus events; the local DEGRADED_CHARS_PER_SEC pace is used
// only when the speech channel reported itself degraded or never spoke.
export function visibleChars(overlay: ClarifyOverlay, nowMs: number): number {
  const total = overlay.text.length;
  const r = overlay.reveal;
  if (r.status === "done" || r.status === "failed") return total;
  if (r.degraded) {
    const elapsed = Math.max(0, nowMs - (r.startedAtMs ?? r.shownAtMs));
    return Math.min(total, Math.floor((elapsed / 1000) * DEGRADED_CHARS_PER_SEC));
  }
  if (r.status !== "speaking" || r.startedAtMs === null) return 0;
  if (r.durationMs <= 0) return total;
  const frac = (nowMs - r.startedAtMs) / r.durationMs;
  return Math.min(total, Math.max(0, Math.floor(frac * total)));
}
