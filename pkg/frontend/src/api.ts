// Typed fetch client for the lecturekit HTTP service. Every method maps to
// one route; errors carry the server's {code, httpStatus, message, detail}.

import type {
  ApiErrorBody,
  BreakResponse,
  ClarifyResponse,
  DifficultyResponse,
  HighlightResponse,
  InteractionRecord,
  LectureCard,
  Manifest,
  PositionResponse,
  QuizAnswerResponse,
  QuizNextResponse,
  Rect,
  RecordsResponse,
  ReplayResponse,
  SectionContent,
  SessionSnapshot,
  SummaryDocument,
  VisualResponse,
} from "./types";

export class ApiError extends Error {
  constructor(
    readonly code: string,
    readonly httpStatus: number,
    message: string,
    readonly detail?: unknown,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export type HealthInfo = {
  service: string;
  mock: boolean;
  lectures: number;
  sessions: number;
};

export type CreateSessionRequest = {
  bundleId: string;
  interests?: string[];
  difficulty?: number;
  voiceId?: string;
  avatarRect?: Rect;
};

export type SessionInfo = SessionSnapshot & { eventCount: number };

export class LectureApi {
  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = (...args) => fetch(...args),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, {
      method,
      headers: body === undefined ? undefined : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let parsed: ApiErrorBody | null = null;
      try {
        parsed = (await response.json()) as ApiErrorBody;
      } catch {
        // non-JSON error body
      }
      throw new ApiError(
        parsed?.code ?? "http_error",
        parsed?.httpStatus ?? response.status,
        parsed?.message ?? `HTTP ${response.status} on ${method} ${path}`,
        parsed?.detail,
      );
    }
    return (await response.json()) as T;
  }

  health(): Promise<HealthInfo> {
    return this.request("GET", "/");
  }

  // --- lecture assets ---------------------------------------------------------

  lectures(): Promise<LectureCard[]> {
    return this.request("GET", "/lectures");
  }

  manifest(bundleId: string): Promise<Manifest> {
    return this.request("GET", `/lectures/${bundleId}/manifest`);
  }

  sectionContent(bundleId: string, index: number): Promise<SectionContent> {
    return this.request("GET", `/lectures/${bundleId}/sections/${index}/content.json`);
  }

  slideUrl(bundleId: string, index: number): string {
    return `${this.baseUrl}/lectures/${bundleId}/sections/${index}/slide.png`;
  }

  exampleUrl(bundleId: string, htmlRef: string): string {
    const name = htmlRef.split("/").pop() ?? htmlRef;
    return `${this.baseUrl}/lectures/${bundleId}/examples/${encodeURIComponent(name)}`;
  }

  videoUrl(bundleId: string): string {
    return `${this.baseUrl}/lectures/${bundleId}/video`;
  }

  // --- session lifecycle ------------------------------------------------------

  createSession(req: CreateSessionRequest): Promise<SessionSnapshot> {
    return this.request("POST", "/sessions", req);
  }

  getSession(sessionId: string): Promise<SessionInfo> {
    return this.request("GET", `/sessions/${sessionId}`);
  }

  clarify(sessionId: string, body: { areaRect?: Rect; question?: string }): Promise<ClarifyResponse> {
    return this.request("POST", `/sessions/${sessionId}/clarify`, body);
  }

  visual(sessionId: string, areaRect: Rect): Promise<VisualResponse> {
    return this.request("POST", `/sessions/${sessionId}/visual`, { areaRect });
  }

  dismissVisual(sessionId: string): Promise<SessionSnapshot> {
    return this.request("POST", `/sessions/${sessionId}/visual/dismiss`);
  }

  quizNext(sessionId: string, sectionId?: string): Promise<QuizNextResponse> {
    return this.request(
      "POST",
      `/sessions/${sessionId}/quiz/next`,
      sectionId === undefined ? {} : { sectionId },
    );
  }

  quizAnswer(sessionId: string, answer: string): Promise<QuizAnswerResponse> {
    return this.request("POST", `/sessions/${sessionId}/quiz/answer`, { answer });
  }

  setDifficulty(sessionId: string, level: number): Promise<DifficultyResponse> {
    return this.request("POST", `/sessions/${sessionId}/difficulty`, { level });
  }

  takeBreak(sessionId: string, minutes: number): Promise<BreakResponse> {
    return this.request("POST", `/sessions/${sessionId}/break`, { minutes });
  }

  setHighlight(sessionId: string, enabled: boolean): Promise<HighlightResponse> {
    return this.request("POST", `/sessions/${sessionId}/highlight`, { enabled });
  }

  setPosition(sessionId: string, tSec: number): Promise<PositionResponse> {
    return this.request("POST", `/sessions/${sessionId}/position`, { tSec });
  }

  openExample(sessionId: string, index: number): Promise<SessionSnapshot> {
    return this.request("POST", `/sessions/${sessionId}/example/open`, { index });
  }

  closeExample(sessionId: string): Promise<SessionSnapshot> {
    return this.request("POST", `/sessions/${sessionId}/example/close`);
  }

  openSummary(sessionId: string): Promise<SessionSnapshot> {
    return this.request("POST", `/sessions/${sessionId}/summary/open`);
  }

  closeSummary(sessionId: string): Promise<SessionSnapshot> {
    return this.request("POST", `/sessions/${sessionId}/summary/close`);
  }

  addNote(sessionId: string, text: string, areaRect?: Rect): Promise<InteractionRecord> {
    return this.request("POST", `/sessions/${sessionId}/note`, { text, areaRect });
  }

  replay(sessionId: string, recordIndex: number): Promise<ReplayResponse> {
    return this.request("POST", `/sessions/${sessionId}/replay`, { recordIndex });
  }

  summary(sessionId: string): Promise<SummaryDocument> {
    return this.request("GET", `/sessions/${sessionId}/summary`);
  }

  records(sessionId: string): Promise<RecordsResponse> {
    return this.request("GET", `/sessions/${sessionId}/records`);
  }

  eventsUrl(sessionId: string, after = 0): string {
    return `${this.baseUrl}/sessions/${sessionId}/events?after=${after}`;
  }
}
