// Wire types for the lecturekit HTTP service. Field names mirror the JSON
// the server emits; keep them in sync with the Python serializers.

// Normalized rectangle [x0, y0, x1, y1] with coordinates in 0..1.
export type Rect = [number, number, number, number];

export type SessionMode =
  | "Playing"
  | "Clarifying"
  | "VisualShown"
  | "QuizActive"
  | "OnBreak"
  | "SummaryView"
  | "ExampleActive";

export type LectureCard = {
  id: string;
  title: string;
  durationSec: number;
  sectionCount: number;
  exampleCount: number;
  createdAt: string;
};

export type ManifestSection = {
  id: string;
  startSec: number;
  endSec: number;
  dir: string;
};

export type ExampleAsset = {
  sectionId: string;
  triggerSec: number;
  htmlRef: string;
  title: string;
};

export type Manifest = {
  id: string;
  title: string;
  videoRef: string;
  durationSec: number;
  createdAt: string;
  sections: ManifestSection[];
  examples: ExampleAsset[];
};

export type TranscriptSegment = {
  startSec: number;
  endSec: number;
  text: string;
};

// Per-section content document served at /lectures/{id}/sections/{n}/content.json.
export type SectionContent = {
  id: string;
  startSec: number;
  endSec: number;
  slideImageRef: string;
  title: string;
  mainConcepts: string[];
  keyPoints: string[];
  equations: string[] | null;
  diagrams: string[] | null;
  contentFingerprint: string;
  referenceResolution: [number, number];
  transcript: TranscriptSegment[];
};

export type SessionSnapshot = {
  sessionId: string;
  bundleId: string;
  positionSec: number;
  mode: SessionMode;
  difficulty: number;
  interests: string[];
  highlightEnabled: boolean;
  recordCount: number;
};

// Overlay placement computed server-side against the slide occupancy grid.
export type OverlayRegion = {
  gridRect: [number, number, number, number];
  rect: Rect;
  cellCount: number;
  distanceToAnchor: number;
};

export type OverlayPlan = {
  region: OverlayRegion;
  fontScale: number;
  scrollable: boolean;
  modal: boolean;
  estimatedCapacityChars: number;
};

export type QuizType = "multiple-choice" | "true-false" | "fill-blank";

// Non-choice items carry an empty options list.
export type QuizItem = {
  type: QuizType;
  question: string;
  options: string[];
  correctAnswer: string;
  explanation: string;
  difficulty: number;
};

export type ImageResult = {
  url: string;
  title: string;
  sourceDomain: string;
  thumbUrl: string;
};

export type HighlightEntry = {
  box: Rect;
  relevantTranscript: string;
  startSec: number;
  endSec: number;
};

export type InteractionRecord = {
  kind: string;
  videoSec: number;
  wallSec: number;
  selectedArea: Rect | null;
  prompt: string | null;
  response: string | null;
  extra: Record<string, unknown>;
};

export type SummarySection = {
  sectionId: string;
  title: string;
  columnIndex: number;
  x: number;
  width: number;
  cardCount: number;
};

export type SummaryCard = {
  recordRef: number;
  x: number;
  y: number;
  w: number;
  h: number;
  kind: string;
  replayText: string | null;
};

export type SummaryDocument = {
  sessionId: string;
  sections: SummarySection[];
  canvas: SummaryCard[];
};

// --- event stream --------------------------------------------------------------

export type SpeechStatus = "queued" | "speaking" | "done" | "failed";

export type OverlayShowPayload =
  | { overlayId: number; kind: "clarify"; plan: OverlayPlan; text: string }
  | { overlayId: number; kind: "visual"; keywords: string; results: ImageResult[] };

export type OverlayHidePayload = { overlayId: number };

export type SpeechStatusPayload = {
  jobId: number;
  status: SpeechStatus;
  degraded: boolean;
  estimatedDurationSec: number;
};

export type HighlightSetPayload = { enabled: boolean; boxes: HighlightEntry[] };

// Served quiz (from /quiz/next) carries the item; a position-crossing prompt
// only names the section that is due.
export type QuizPromptPayload =
  | { sectionId: string; level: number; levelFallback: boolean; item: QuizItem }
  | { sectionId: string; dueAt: number };

export type ExamplePromptPayload = { asset: ExampleAsset; manual: boolean };

export type ResumePayload = {
  after: "clarify" | "quiz" | "break" | "example" | "summary";
  overlayId?: number;
  correct?: boolean;
};

export type BreakStartPayload = { minutes: number; story: string };
export type BreakEndPayload = { minutes: number };

export type SessionEvent =
  | { kind: "overlayShow"; seq: number; payload: OverlayShowPayload }
  | { kind: "overlayHide"; seq: number; payload: OverlayHidePayload }
  | { kind: "speechStatus"; seq: number; payload: SpeechStatusPayload }
  | { kind: "highlightSet"; seq: number; payload: HighlightSetPayload }
  | { kind: "quizPrompt"; seq: number; payload: QuizPromptPayload }
  | { kind: "examplePrompt"; seq: number; payload: ExamplePromptPayload }
  | { kind: "resume"; seq: number; payload: ResumePayload }
  | { kind: "breakStart"; seq: number; payload: BreakStartPayload }
  | { kind: "breakEnd"; seq: number; payload: BreakEndPayload };

export type EventKind = SessionEvent["kind"];

// --- request/response bodies -----------------------------------------------------

export type ClarifyResponse = { text: string; plan: OverlayPlan; jobId: number };
export type VisualResponse = { results: ImageResult[] };
export type QuizNextResponse = { item: QuizItem; level: number; levelFallback: boolean };
export type QuizAnswerResponse = { correct: boolean; explanation: string };
export type DifficultyResponse = { difficulty: number };
export type BreakResponse = { story: string; jobId: number; minutes: number };
export type HighlightResponse = { enabled: boolean; active: HighlightEntry[] };
export type PositionResponse = {
  positionSec: number;
  quizPrompts: string[];
  example: ExampleAsset | null;
};
export type ReplayResponse = { jobId: number; text: string };
export type RecordsResponse = { records: InteractionRecord[] };

export type ApiErrorBody = {
  code: string;
  httpStatus: number;
  message: string;
  detail?: unknown;
};
