// Region selection: drag a rectangle over the video to ask about it. The
// selection pauses playback locally and opens the clarification dialogue,
// pre-filled with the default question plus the two preset follow-ups.
// A zero-area click is treated as a stray click and selects nothing.

import type { Rect } from "./types";

export const DEFAULT_QUESTION = "Please explain this.";
export const PRESET_QUESTIONS = [
  "Walk me through this step by step",
  "Can you make an analogy?",
] as const;

// Drags smaller than this many device pixels on either axis count as clicks.
export const MIN_DRAG_PX = 3;

export type SurfaceBounds = { left: number; top: number; width: number; height: number };

export function normalizeDrag(
  x0: number,
  y0: number,
  x1: number,
  y1: number,
  bounds: SurfaceBounds,
): Rect | null {
  if (bounds.width <= 0 || bounds.height <= 0) return null;
  const left = Math.min(x0, x1);
  const right = Math.max(x0, x1);
  const top = Math.min(y0, y1);
  const bottom = Math.max(y0, y1);
  if (right - left < MIN_DRAG_PX || bottom - top < MIN_DRAG_PX) return null;

  const clamp = (v: number) => Math.min(1, Math.max(0, v));
  const rect: Rect = [
    clamp((left - bounds.left) / bounds.width),
    clamp((top - bounds.top) / bounds.height),
    clamp((right - bounds.left) / bounds.width),
    clamp((bottom - bounds.top) / bounds.height),
  ];
  if (rect[2] - rect[0] <= 0 || rect[3] - rect[1] <= 0) return null;
  return rect;
}

// Wires pointer events on the video surface; onSelect(null) for stray clicks.
// Returns a cleanup function.
export function attachRegionSelect(
  surface: HTMLElement,
  onSelect: (rect: Rect | null) => void,
): () => void {
  let start: { x: number; y: number } | null = null;
  let ghost: HTMLElement | null = null;

  const removeGhost = () => {
    ghost?.remove();
    ghost = null;
  };

  const onDown = (event: PointerEvent) => {
    start = { x: event.clientX, y: event.clientY };
    ghost = document.createElement("div");
    ghost.className = "lk-drag-rect";
    surface.appendChild(ghost);
  };

  const onMove = (event: PointerEvent) => {
    if (!start || !ghost) return;
    const bounds = surface.getBoundingClientRect();
    ghost.style.left = `${Math.min(start.x, event.clientX) - bounds.left}px`;
    ghost.style.top = `${Math.min(start.y, event.clientY) - bounds.top}px`;
    ghost.style.width = `${Math.abs(event.clientX - start.x)}px`;
    ghost.style.height = `${Math.abs(event.clientY - start.y)}px`;
  };

  const onUp = (event: PointerEvent) => {
    if (!start) return;
    const bounds = surface.getBoundingClientRect();
    const rect = normalizeDrag(start.x, start.y, event.clientX, event.clientY, bounds);
    start = null;
    removeGhost();
    onSelect(rect);
  };

  surface.addEventListener("pointerdown", onDown);
  surface.addEventListener("pointermove", onMove);
  surface.addEventListener("pointerup", onUp);
  return () => {
    surface.removeEventListener("pointerdown", onDown);
    surface.removeEventListener("pointermove", onMove);
    surface.removeEventListener("pointerup", onUp);
    removeGhost();
  };
}

export type DialogueHandlers = {
  onSubmit?: (question: string) => void;
  onVisual?: () => void;
  onCancel?: () => void;
};

// Clarification dialogue for a selected region. Submitting posts the typed
// question; the preset buttons submit their canned question directly.
export function renderClarifyDialogue(rect: Rect, handlers: DialogueHandlers = {}): HTMLElement {
  const dialogue = document.createElement("div");
  dialogue.className = "lk-clarify-dialogue";
  dialogue.dataset.rect = rect.map((v) => v.toFixed(4)).join(",");

  const input = document.createElement("textarea");
  input.className = "lk-clarify-dialogue__question";
  input.value = DEFAULT_QUESTION;
  dialogue.appendChild(input);

  const presets = document.createElement("div");
  presets.className = "lk-clarify-dialogue__presets";
  for (const preset of PRESET_QUESTIONS) {
    const button = document.createElement("button");
    button.type = "button";
    button.className = "lk-clarify-dialogue__preset";
    button.textContent = preset;
    button.addEventListener("click", () => handlers.onSubmit?.(preset));
    presets.appendChild(button);
  }
  dialogue.appendChild(presets);

  const actions = document.createElement("div");
  actions.className = "lk-clarify-dialogue__actions";

  const ask = document.createElement("button");
  ask.type = "button";
  ask.className = "lk-clarify-dialogue__ask";
  ask.textContent = "Ask";
  ask.addEventListener("click", () => handlers.onSubmit?.(input.value));
  actions.appendChild(ask);

  const visual = document.createElement("button");
  visual.type = "button";
  visual.className = "lk-clarify-dialogue__visual";
  visual.textContent = "Show a visual";
  visual.addEventListener("click", () => handlers.onVisual?.());
  actions.appendChild(visual);

  const cancel = document.createElement("button");
  cancel.type = "button";
  cancel.className = "lk-clarify-dialogue__cancel";
  cancel.textContent = "Cancel";
  cancel.addEventListener("click", () => handlers.onCancel?.());
  actions.appendChild(cancel);

  dialogue.appendChild(actions);
  return dialogue;
}
