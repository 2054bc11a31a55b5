// Server-sent-events client for /sessions/{id}/events, plus the frame parser
// shared with recorded-stream replays. The data field of every frame carries
// the full event envelope {kind, payload, seq}; the id/event frame fields
// duplicate seq/kind for native SSE semantics.

import type { SessionEvent } from "./types";

export const BASE_DELAY_MS = 1000;
export const MAX_DELAY_MS = 30000;

export type SSEFrame = { id: string | null; event: string | null; data: string };

// Incremental parser: feed() chunks as they arrive, collect complete frames.
export class SSEParser {
  private buffer = "";

  feed(chunk: string): SSEFrame[] {
    this.buffer += chunk;
    const frames: SSEFrame[] = [];
    let cut: number;
    while ((cut = this.buffer.indexOf("\n\n")) !== -1) {
      const block = this.buffer.slice(0, cut);
      this.buffer = this.buffer.slice(cut + 2);
      const frame = parseFrame(block);
      if (frame) frames.push(frame);
    }
    return frames;
  }
}

function parseFrame(block: string): SSEFrame | null {
  let id: string | null = null;
  let event: string | null = null;
  const data: string[] = [];
  for (const line of block.split("\n")) {
    if (!line || line.startsWith(":")) continue; // keepalive comment
    const sep = line.indexOf(":");
    if (sep === -1) continue;
    const field = line.slice(0, sep);
    let value = line.slice(sep + 1);
    if (value.startsWith(" ")) value = value.slice(1);
    if (field === "id") id = value;
    else if (field === "event") event = value;
    else if (field === "data") data.push(value);
  }
  if (data.length === 0) return null;
  return { id, event, data: data.join("\n") };
}

// Decode one frame into a typed session event, checking that the envelope
// agrees with the frame's id/event fields.
export function decodeFrame(frame: SSEFrame): SessionEvent {
  const envelope = JSON.parse(frame.data) as SessionEvent;
  if (typeof envelope.seq !== "number" || typeof envelope.kind !== "string") {
    throw new Error(`malformed event envelope: ${frame.data}`);
  }
  if (frame.event !== null && frame.event !== envelope.kind) {
    throw new Error(`frame event ${frame.event} != envelope kind ${envelope.kind}`);
  }
  if (frame.id !== null && Number(frame.id) !== envelope.seq) {
    throw new Error(`frame id ${frame.id} != envelope seq ${envelope.seq}`);
  }
  return envelope;
}

// Parse a complete recorded stream (e.g. a fixture file) into events.
export function parseEventStream(text: string): SessionEvent[] {
  return new SSEParser().feed(text).map(decodeFrame);
}

export type EventStreamOptions = {
  // Replays missed events on (re)connect; advanced as events arrive.
  after?: number;
  fetchFn?: typeof fetch;
  onEvent: (event: SessionEvent) => void;
  onError?: (error: unknown) => void;
};

// Single-consumer stream reader over fetch streaming. Reconnects with
// exponential backoff, resuming from the last seen seq via Last-Event-ID.
export class EventStream {
  private lastSeq: number;
  private attempt = 0;
  private stopped = false;
  private controller: AbortController | null = null;
  private timer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private readonly url: string,
    private readonly options: EventStreamOptions,
  ) {
    this.lastSeq = options.after ?? 0;
  }

  get lastEventId(): number {
    return this.lastSeq;
  }

  connect(): void {
    if (this.stopped) return;
    void this.run();
  }

  close(): void {
    this.stopped = true;
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    this.controller?.abort();
    this.controller = null;
  }

  private scheduleReconnect(): void {
    if (this.stopped) return;
    const delay = Math.min(BASE_DELAY_MS * 2 ** this.attempt, MAX_DELAY_MS);
    this.attempt++;
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.run();
    }, delay);
  }

  private async run(): Promise<void> {
    const fetchFn = this.options.fetchFn ?? fetch;
    this.controller = new AbortController();
    try {
      const response = await fetchFn(this.url, {
        headers: {
          accept: "text/event-stream",
          "last-event-id": String(this.lastSeq),
        },
        signal: this.controller.signal,
      });
      if (!response.ok || !response.body) {
        throw new Error(`event stream HTTP ${response.status}`);
      }
      this.attempt = 0;
      const parser = new SSEParser();
      const decoder = new TextDecoder();
      const reader = response.body.getReader();
      for (;;) {
        const { done, value } = await reader.read();
        if (done) break;
        for (const frame of parser.feed(decoder.decode(value, { stream: true }))) {
          const event = decodeFrame(frame);
          if (event.seq <= this.lastSeq) continue;
          this.lastSeq = event.seq;
          this.options.onEvent(event);
        }
      }
    } catch (error) {
      if (this.stopped) return;
      this.options.onError?.(error);
    }
    this.scheduleReconnect();
  }
}
