// Player controller: owns the session view state, the single event-stream
// consumer, and the per-session action queue. All mutations funnel through
// the pure reducers in state.ts; this class only wires DOM, network and the
// <video> element together and re-renders after every ack or event.

import { ActionQueue } from "./actionQueue";
import { LectureApi } from "./api";
import { deriveControlBarState, renderControlBar, type LocalPlayback } from "./controls";
import { renderOverlayLayer, type ElementSize } from "./overlay";
import { renderQuizModal } from "./quiz";
import {
  DEFAULT_QUESTION,
  attachRegionSelect,
  renderClarifyDialogue,
} from "./regionSelect";
import {
  applyEvent,
  applyQuizAnswer,
  applySnapshot,
  initialView,
  type SessionView,
} from "./state";
import { EventStream } from "./sse";
import { activeCue, renderSubtitle } from "./subtitles";
import {
  attachPanZoom,
  initialViewport,
  renderSummaryCanvas,
  type CanvasViewport,
} from "./summaryCanvas";
import { renderTimeline } from "./timeline";
import type {
  InteractionRecord,
  Manifest,
  Rect,
  SessionEvent,
  SessionSnapshot,
  SummaryDocument,
  TranscriptSegment,
} from "./types";

// Reserved bottom-right viewport where the avatar video sits; reported to
// the server at session creation so overlays are never planned under it.
export const AVATAR_RECT: Rect = [0.78, 0.74, 1.0, 1.0];

export type PlayerOptions = {
  api: LectureApi;
  manifest: Manifest;
  mount: HTMLElement;
  titles?: Record<string, string>;
  cues?: TranscriptSegment[];
  video?: HTMLVideoElement | null;
  now?: () => number;
};

export class Player {
  readonly api: LectureApi;
  readonly manifest: Manifest;
  readonly queue = new ActionQueue();

  view: SessionView;
  local: LocalPlayback = { volume: 1, muted: false, speed: 1, subtitlesOn: true };
  canvasViewport: CanvasViewport = initialViewport();
  summaryDoc: SummaryDocument | null = null;
  records: InteractionRecord[] | null = null;

  // Transient input affordances (dialogue open, drag ghost) are local UI
  // state; session state itself only moves on acks and stream events.
  dialogueRect: Rect | null = null;

  private readonly mount: HTMLElement;
  private readonly titles: Record<string, string>;
  private readonly cues: TranscriptSegment[];
  private readonly video: HTMLVideoElement | null;
  private readonly now: () => number;
  private stream: EventStream | null = null;
  private cleanups: Array<() => void> = [];

  private surface!: HTMLElement;
  private overlayMount!: HTMLElement;
  private subtitleMount!: HTMLElement;
  private timelineMount!: HTMLElement;
  private controlsMount!: HTMLElement;
  private panelMount!: HTMLElement;

  constructor(options: PlayerOptions, snapshot: SessionSnapshot) {
    this.api = options.api;
    this.manifest = options.manifest;
    this.mount = options.mount;
    this.titles = options.titles ?? {};
    this.cues = options.cues ?? [];
    this.video = options.video ?? null;
    this.now = options.now ?? (() => Date.now());
    this.view = applySnapshot(initialView(), snapshot);
    this.buildShell();
    this.render();
  }

  static async create(
    options: PlayerOptions,
    request: { bundleId: string; interests?: string[]; difficulty?: number },
  ): Promise<Player> {
    const snapshot = await options.api.createSession({ ...request, avatarRect: AVATAR_RECT });
    const player = new Player(options, snapshot);
    player.connect();
    return player;
  }

  get sessionId(): string {
    return this.view.session?.sessionId ?? "";
  }

  // --- event stream (single consumer) -----------------------------------------

  connect(): void {
    this.stream = new EventStream(this.api.eventsUrl(this.sessionId), {
      onEvent: (event) => this.handleEvent(event),
    });
    this.stream.connect();
  }

  close(): void {
    this.stream?.close();
    this.stream = null;
    for (const cleanup of this.cleanups) cleanup();
    this.cleanups = [];
  }

  handleEvent(event: SessionEvent): void {
    this.view = applyEvent(this.view, event, this.now());
    this.render();
  }

  // --- user actions (queued sequentially) --------------------------------------

  private act<T>(task: () => Promise<T>): Promise<T> {
    return this.queue.run(task);
  }

  private async refreshSnapshot(): Promise<void> {
    const info = await this.api.getSession(this.sessionId);
    this.view = applySnapshot(this.view, info);
    this.render();
  }

  selectRegion(rect: Rect | null): void {
    if (rect === null) return; // stray click
    this.video?.pause(); // pause locally while the dialogue is open
    this.dialogueRect = rect;
    this.render();
  }

  cancelDialogue(): void {
    this.dialogueRect = null;
    this.render(); // syncVideo resumes if the session is still Playing
  }

  clarify(question: string = DEFAULT_QUESTION): Promise<void> {
    const areaRect = this.dialogueRect ?? undefined;
    this.dialogueRect = null;
    return this.act(async () => {
      await this.api.clarify(this.sessionId, { areaRect, question });
      await this.refreshSnapshot();
    });
  }

  visualSearch(): Promise<void> {
    const areaRect = this.dialogueRect;
    this.dialogueRect = null;
    if (!areaRect) return Promise.resolve();
    return this.act(async () => {
      await this.api.visual(this.sessionId, areaRect);
      await this.refreshSnapshot();
    });
  }

  dismissOverlay(): Promise<void> {
    return this.act(async () => {
      const snap = await this.api.dismissVisual(this.sessionId);
      this.view = applySnapshot(this.view, snap);
      this.render();
    });
  }

  requestQuiz(sectionId?: string): Promise<void> {
    return this.act(async () => {
      await this.api.quizNext(this.sessionId, sectionId);
      await this.refreshSnapshot();
    });
  }

  answerQuiz(answer: string): Promise<void> {
    return this.act(async () => {
      const ack = await this.api.quizAnswer(this.sessionId, answer);
      this.view = applyQuizAnswer(this.view, answer, ack);
      await this.refreshSnapshot();
    });
  }

  closeQuiz(): void {
    // The answer ack already resumed the session server-side; the result
    // panel is dismissed with the next render once quiz state cleared.
    this.view = { ...this.view, quiz: null };
    this.render();
  }

  setDifficulty(level: number): Promise<void> {
    return this.act(async () => {
      await this.api.setDifficulty(this.sessionId, level);
      await this.refreshSnapshot();
    });
  }

  takeBreak(minutes: number): Promise<void> {
    return this.act(async () => {
      await this.api.takeBreak(this.sessionId, minutes);
      await this.refreshSnapshot();
    });
  }

  toggleHighlight(enabled: boolean): Promise<void> {
    return this.act(async () => {
      await this.api.setHighlight(this.sessionId, enabled);
      await this.refreshSnapshot();
    });
  }

  seek(tSec: number): Promise<void> {
    return this.act(async () => {
      const ack = await this.api.setPosition(this.sessionId, tSec);
      if (this.video && Math.abs(this.video.currentTime - ack.positionSec) > 0.25) {
        this.video.currentTime = ack.positionSec;
      }
      await this.refreshSnapshot();
    });
  }

  openExample(index: number): Promise<void> {
    return this.act(async () => {
      const snap = await this.api.openExample(this.sessionId, index);
      this.view = applySnapshot(this.view, snap);
      this.render();
    });
  }

  closeExample(): Promise<void> {
    return this.act(async () => {
      const snap = await this.api.closeExample(this.sessionId);
      // The stream's resume(after=example) event clears view.example.
      this.view = applySnapshot(this.view, snap);
      this.render();
    });
  }

  openSummary(): Promise<void> {
    return this.act(async () => {
      const snap = await this.api.openSummary(this.sessionId);
      this.view = applySnapshot(this.view, snap);
      this.summaryDoc = await this.api.summary(this.sessionId);
      this.records = (await this.api.records(this.sessionId)).records;
      this.render();
    });
  }

  closeSummary(): Promise<void> {
    return this.act(async () => {
      const snap = await this.api.closeSummary(this.sessionId);
      this.view = applySnapshot(this.view, snap);
      this.render();
    });
  }

  replayCard(recordRef: number): Promise<void> {
    return this.act(async () => {
      await this.api.replay(this.sessionId, recordRef);
    });
  }

  togglePlayback(): Promise<void> {
    // Play/pause maps onto the server position clock: pausing posts the
    // current position (a no-op move that acks the snapshot), playing
    // resumes the local element; mode changes only come back via acks.
    if (this.video) {
      if (this.video.paused) void this.video.play();
      else this.video.pause();
    }
    return this.act(async () => {
      await this.refreshSnapshot();
    });
  }

  reportPosition(tSec: number): Promise<void> {
    return this.seek(tSec);
  }

  // --- rendering ---------------------------------------------------------------

  private buildShell(): void {
    this.mount.replaceChildren();
    this.mount.className = "lk-player";

    this.surface = document.createElement("div");
    this.surface.className = "lk-player__surface";
    if (this.video) {
      this.video.classList.add("lk-player__video");
      this.surface.appendChild(this.video);
    }

    this.overlayMount = document.createElement("div");
    this.overlayMount.className = "lk-player__overlays";
    this.surface.appendChild(this.overlayMount);

    const avatar = document.createElement("div");
    avatar.className = "lk-avatar";
    avatar.dataset.rect = AVATAR_RECT.join(",");
    this.surface.appendChild(avatar);

    this.subtitleMount = document.createElement("div");
    this.subtitleMount.className = "lk-player__subtitles";
    this.surface.appendChild(this.subtitleMount);

    this.mount.appendChild(this.surface);

    this.timelineMount = document.createElement("div");
    this.timelineMount.className = "lk-player__timeline";
    this.mount.appendChild(this.timelineMount);

    this.controlsMount = document.createElement("div");
    this.controlsMount.className = "lk-player__controls";
    this.mount.appendChild(this.controlsMount);

    this.panelMount = document.createElement("div");
    this.panelMount.className = "lk-player__panels";
    this.mount.appendChild(this.panelMount);

    this.cleanups.push(attachRegionSelect(this.surface, (rect) => this.selectRegion(rect)));
  }

  surfaceSize(): ElementSize {
    const bounds = this.surface.getBoundingClientRect();
    if (bounds.width > 0 && bounds.height > 0) {
      return { width: bounds.width, height: bounds.height };
    }
    return { width: 960, height: 540 };
  }

  render(nowMs: number = this.now()): void {
    const size = this.surfaceSize();

    this.overlayMount.replaceChildren(
      renderOverlayLayer(this.view, size, nowMs, {
        onDismiss: () => void this.dismissOverlay(),
      }),
    );

    const tSec = this.view.session?.positionSec ?? 0;
    this.subtitleMount.replaceChildren(
      renderSubtitle(this.local.subtitlesOn ? activeCue(this.cues, tSec) : null),
    );

    this.timelineMount.replaceChildren(
      renderTimeline(this.manifest, {
        titles: this.titles,
        quizDue: this.view.quizDue,
        onSeek: (t) => void this.seek(t),
        onQuizMarker: (sectionId) => void this.requestQuiz(sectionId),
      }),
    );

    this.controlsMount.replaceChildren(
      renderControlBar(deriveControlBarState(this.view, this.local), {
        onPlayPause: () => void this.togglePlayback(),
        onVolume: (volume) => this.setLocal({ volume }),
        onMute: (muted) => this.setLocal({ muted }),
        onSubtitles: (subtitlesOn) => this.setLocal({ subtitlesOn }),
        onSpeed: (speed) => this.setLocal({ speed }),
        onHighlight: (enabled) => void this.toggleHighlight(enabled),
        onBreak: (minutes) => void this.takeBreak(minutes),
        onExamples: () => void this.openExample(0),
        onSummary: () =>
          void (this.view.summaryOpen ? this.closeSummary() : this.openSummary()),
        onDifficulty: (level) => void this.setDifficulty(level),
      }),
    );

    this.renderPanels();
    this.syncVideo();
  }

  private setLocal(patch: Partial<LocalPlayback>): void {
    this.local = { ...this.local, ...patch };
    if (this.video) {
      this.video.volume = this.local.volume;
      this.video.muted = this.local.muted;
      this.video.playbackRate = this.local.speed;
    }
    this.render();
  }

  private renderPanels(): void {
    const panels: HTMLElement[] = [];

    if (this.dialogueRect) {
      panels.push(
        renderClarifyDialogue(this.dialogueRect, {
          onSubmit: (question) => void this.clarify(question),
          onVisual: () => void this.visualSearch(),
          onCancel: () => this.cancelDialogue(),
        }),
      );
    }

    if (this.view.quiz) {
      panels.push(
        renderQuizModal(this.view.quiz, {
          onAnswer: (answer) => void this.answerQuiz(answer),
          onClose: () => this.closeQuiz(),
        }),
      );
    }

    if (this.view.breakState) {
      const panel = document.createElement("div");
      panel.className = "lk-break";
      const heading = document.createElement("div");
      heading.className = "lk-break__heading";
      heading.textContent = `Break (${this.view.breakState.minutes} min)`;
      const story = document.createElement("p");
      story.className = "lk-break__story";
      story.textContent = this.view.breakState.story;
      panel.append(heading, story);
      panels.push(panel);
    }

    if (this.view.example) {
      const panel = document.createElement("div");
      panel.className = "lk-example";
      const heading = document.createElement("div");
      heading.className = "lk-example__heading";
      heading.textContent = this.view.example.asset.title;
      const frame = document.createElement("iframe");
      frame.className = "lk-example__frame";
      frame.src = this.api.exampleUrl(this.manifest.id, this.view.example.asset.htmlRef);
      const close = document.createElement("button");
      close.type = "button";
      close.className = "lk-example__close";
      close.textContent = "Back to lecture";
      close.addEventListener("click", () => void this.closeExample());
      panel.append(heading, frame, close);
      panels.push(panel);
    }

    if (this.view.summaryOpen && this.summaryDoc) {
      const canvas = renderSummaryCanvas(this.summaryDoc, this.records, this.canvasViewport, {
        onReplay: (recordRef) => void this.replayCard(recordRef),
      });
      // Listeners die with the element on the next render; no cleanup needed.
      attachPanZoom(
        canvas,
        () => this.canvasViewport,
        (viewport) => {
          this.canvasViewport = viewport;
          this.render();
        },
      );
      panels.push(canvas);
    }

    this.panelMount.replaceChildren(...panels);
  }

  private syncVideo(): void {
    if (!this.video) return;
    const shouldPlay = this.view.playing && this.dialogueRect === null;
    if (shouldPlay && this.video.paused) void this.video.play();
    if (!shouldPlay && !this.video.paused) this.video.pause();
  }
}
