// Summary canvas: the session's interaction cards laid out in fixed
// section columns, shown inside a pannable/zoomable viewport. Pan and zoom
// only change the surface transform; card coordinates are the server's
// canvas units and never move.

import type { InteractionRecord, SummaryDocument } from "./types";

export type CanvasViewport = { x: number; y: number; zoom: number };

export const MIN_ZOOM = 0.25;
export const MAX_ZOOM = 4;

export function initialViewport(): CanvasViewport {
  return { x: 0, y: 0, zoom: 1 };
}

export function panViewport(viewport: CanvasViewport, dx: number, dy: number): CanvasViewport {
  return { ...viewport, x: viewport.x + dx, y: viewport.y + dy };
}

// Zoom about a screen-space origin so the canvas point under the cursor
// stays put: screen = canvas * zoom + offset.
export function zoomViewport(
  viewport: CanvasViewport,
  factor: number,
  originX: number,
  originY: number,
): CanvasViewport {
  const zoom = Math.min(MAX_ZOOM, Math.max(MIN_ZOOM, viewport.zoom * factor));
  const scale = zoom / viewport.zoom;
  return {
    zoom,
    x: originX - (originX - viewport.x) * scale,
    y: originY - (originY - viewport.y) * scale,
  };
}

export type SummaryHandlers = {
  onReplay?: (recordRef: number) => void;
};

function badgeFor(record: InteractionRecord): HTMLElement | null {
  if (record.kind !== "quizAnswer") return null;
  const badge = document.createElement("span");
  const correct = record.extra["correct"] === true;
  badge.className = correct
    ? "lk-card__badge lk-card__badge--correct"
    : "lk-card__badge lk-card__badge--incorrect";
  badge.textContent = correct ? "Correct" : "Incorrect";
  return badge;
}

export function renderSummaryCanvas(
  doc: SummaryDocument,
  records: readonly InteractionRecord[] | null,
  viewport: CanvasViewport,
  handlers: SummaryHandlers = {},
): HTMLElement {
  const root = document.createElement("div");
  root.className = "lk-summary-canvas";

  const surface = document.createElement("div");
  surface.className = "lk-summary-canvas__surface";
  surface.style.transformOrigin = "0 0";
  surface.style.transform = `translate(${viewport.x}px, ${viewport.y}px) scale(${viewport.zoom})`;
  root.appendChild(surface);

  for (const section of doc.sections) {
    const header = document.createElement("div");
    header.className = "lk-summary-column";
    header.dataset.sectionId = section.sectionId;
    header.style.left = `${section.x}px`;
    header.style.width = `${section.width}px`;
    const title = document.createElement("span");
    title.className = "lk-summary-column__title";
    title.textContent = section.title;
    const count = document.createElement("span");
    count.className = "lk-summary-column__count";
    count.textContent = `${section.cardCount} cards`;
    header.append(title, count);
    surface.appendChild(header);
  }

  for (const card of doc.canvas) {
    const el = document.createElement("div");
    el.className = `lk-card lk-card--${card.kind}`;
    el.dataset.recordRef = String(card.recordRef);
    el.style.left = `${card.x}px`;
    el.style.top = `${card.y}px`;
    el.style.width = `${card.w}px`;
    el.style.height = `${card.h}px`;

    const kind = document.createElement("span");
    kind.className = "lk-card__kind";
    kind.textContent = card.kind;
    el.appendChild(kind);

    const record = records?.[card.recordRef] ?? null;
    if (record) {
      const badge = badgeFor(record);
      if (badge) el.appendChild(badge);
    }

    if (card.replayText !== null) {
      const body = document.createElement("p");
      body.className = "lk-card__text";
      body.textContent = card.replayText;
      el.appendChild(body);

      const replay = document.createElement("button");
      replay.type = "button";
      replay.className = "lk-card__replay";
      replay.dataset.recordRef = String(card.recordRef);
      replay.textContent = "Replay";
      replay.addEventListener("click", () => handlers.onReplay?.(card.recordRef));
      el.appendChild(replay);
    }

    surface.appendChild(el);
  }

  return root;
}

// Wires drag-to-pan and wheel-to-zoom; the caller re-renders on change.
export function attachPanZoom(
  root: HTMLElement,
  get: () => CanvasViewport,
  set: (viewport: CanvasViewport) => void,
): () => void {
  let dragging: { x: number; y: number } | null = null;

  const onDown = (event: PointerEvent) => {
    if ((event.target as HTMLElement).closest("button")) return;
    dragging = { x: event.clientX, y: event.clientY };
  };
  const onMove = (event: PointerEvent) => {
    if (!dragging) return;
    set(panViewport(get(), event.clientX - dragging.x, event.clientY - dragging.y));
    dragging = { x: event.clientX, y: event.clientY };
  };
  const onUp = () => {
    dragging = null;
  };
  const onWheel = (event: WheelEvent) => {
    event.preventDefault();
    const bounds = root.getBoundingClientRect();
    const factor = event.deltaY < 0 ? 1.1 : 1 / 1.1;
    set(zoomViewport(get(), factor, event.clientX - bounds.left, event.clientY - bounds.top));
  };

  root.addEventListener("pointerdown", onDown);
  root.addEventListener("pointermove", onMove);
  root.addEventListener("pointerup", onUp);
  root.addEventListener("wheel", onWheel);
  return () => {
    root.removeEventListener("pointerdown", onDown);
    root.removeEventListener("pointermove", onMove);
    root.removeEventListener("pointerup", onUp);
    root.removeEventListener("wheel", onWheel);
  };
}
