// Overlay rendering: maps server OverlayPlan rects (normalized slide
// coordinates) onto the current video element size and drives the
// progressive handwriting-style text reveal from speech status state.

import type { ClarifyOverlay, SessionView, VisualOverlay } from "./state";
import { visibleChars } from "./state";
import type { HighlightEntry, Rect } from "./types";

export type ElementSize = { width: number; height: number };

export type OverlayHandlers = {
  onDismiss?: (overlayId: number) => void;
};

const BASE_FONT_PX = 16;

function px(value: number): string {
  // Fixed precision keeps rendered markup byte-stable across replays.
  return `${Math.round(value * 100) / 100}px`;
}

export function rectToCss(rect: Rect, size: ElementSize): Partial<CSSStyleDeclaration> {
  const [x0, y0, x1, y1] = rect;
  return {
    left: px(x0 * size.width),
    top: px(y0 * size.height),
    width: px((x1 - x0) * size.width),
    height: px((y1 - y0) * size.height),
  };
}

function applyRect(el: HTMLElement, rect: Rect, size: ElementSize): void {
  Object.assign(el.style, rectToCss(rect, size));
}

function dismissButton(overlayId: number, handlers: OverlayHandlers): HTMLButtonElement {
  const button = document.createElement("button");
  button.type = "button";
  button.className = "lk-overlay__dismiss";
  button.setAttribute("aria-label", "Dismiss overlay");
  button.textContent = "×";
  button.addEventListener("click", () => handlers.onDismiss?.(overlayId));
  return button;
}

export function renderClarifyOverlay(
  overlay: ClarifyOverlay,
  size: ElementSize,
  nowMs: number,
  handlers: OverlayHandlers = {},
): HTMLElement {
  const el = document.createElement("div");
  el.className = "lk-overlay lk-overlay--clarify";
  if (overlay.plan.modal) el.classList.add("lk-overlay--modal");
  if (overlay.plan.scrollable) el.classList.add("lk-overlay--scrollable");
  el.dataset.overlayId = String(overlay.overlayId);
  applyRect(el, overlay.plan.region.rect, size);
  el.style.fontSize = px(BASE_FONT_PX * overlay.plan.fontScale);
  if (overlay.plan.scrollable) el.style.overflowY = "auto"; // scrollbar contract

  el.appendChild(dismissButton(overlay.overlayId, handlers));

  const shown = visibleChars(overlay, nowMs);
  const text = document.createElement("div");
  text.className = "lk-overlay__text lk-handwriting";
  text.dataset.reveal = `${shown}/${overlay.text.length}`;

  const ink = document.createElement("span");
  ink.className = "lk-overlay__ink";
  ink.textContent = overlay.text.slice(0, shown);
  text.appendChild(ink);

  if (shown < overlay.text.length) {
    const caret = document.createElement("span");
    caret.className = "lk-overlay__caret";
    text.appendChild(caret);
  }
  el.appendChild(text);
  return el;
}

export function renderVisualOverlay(
  overlay: VisualOverlay,
  size: ElementSize,
  handlers: OverlayHandlers = {},
): HTMLElement {
  const el = document.createElement("div");
  el.className = "lk-overlay lk-overlay--visual";
  el.dataset.overlayId = String(overlay.overlayId);
  applyRect(el, [0.1, 0.1, 0.9, 0.9], size);

  el.appendChild(dismissButton(overlay.overlayId, handlers));

  const caption = document.createElement("div");
  caption.className = "lk-overlay__keywords";
  caption.textContent = overlay.keywords;
  el.appendChild(caption);

  const list = document.createElement("ul");
  list.className = "lk-visual-results";
  for (const result of overlay.results) {
    const item = document.createElement("li");
    item.className = "lk-visual-result";
    const img = document.createElement("img");
    img.src = result.thumbUrl;
    img.alt = result.title;
    const title = document.createElement("span");
    title.className = "lk-visual-result__title";
    title.textContent = result.title;
    const domain = document.createElement("span");
    domain.className = "lk-visual-result__domain";
    domain.textContent = result.sourceDomain;
    item.append(img, title, domain);
    list.appendChild(item);
  }
  el.appendChild(list);
  return el;
}

export function renderHighlightBoxes(
  boxes: readonly HighlightEntry[],
  size: ElementSize,
): HTMLElement {
  const layer = document.createElement("div");
  layer.className = "lk-highlight-layer";
  for (const entry of boxes) {
    const box = document.createElement("div");
    box.className = "lk-highlight-box";
    box.title = entry.relevantTranscript;
    applyRect(box, entry.box, size);
    layer.appendChild(box);
  }
  return layer;
}

// Full overlay layer for the current view: highlights under, overlays over,
// in arrival order (a visual overlay can stack above a clarification).
export function renderOverlayLayer(
  view: SessionView,
  size: ElementSize,
  nowMs: number,
  handlers: OverlayHandlers = {},
): HTMLElement {
  const layer = document.createElement("div");
  layer.className = "lk-overlay-layer";
  layer.style.width = px(size.width);
  layer.style.height = px(size.height);

  if (view.highlight.enabled && view.highlight.boxes.length > 0) {
    layer.appendChild(renderHighlightBoxes(view.highlight.boxes, size));
  }
  for (const overlay of view.overlays) {
    layer.appendChild(
      overlay.kind === "clarify"
        ? renderClarifyOverlay(overlay, size, nowMs, handlers)
        : renderVisualOverlay(overlay, size, handlers),
    );
  }
  return layer;
}
