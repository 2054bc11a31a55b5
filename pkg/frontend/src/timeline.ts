// Timeline strip: one labeled span per section plus a quiz marker pinned at
// each section end. Marker clicks request the next quiz for that section.

import type { Manifest } from "./types";

export type TimelineOptions = {
  // sectionId -> title, loaded from each section's content document.
  titles?: Record<string, string>;
  // Sections whose end-of-section quiz is due (highlights the marker).
  quizDue?: readonly string[];
  onSeek?: (tSec: number) => void;
  onQuizMarker?: (sectionId: string) => void;
};

function pct(fraction: number): string {
  return `${(fraction * 100).toFixed(3)}%`;
}

export function renderTimeline(manifest: Manifest, options: TimelineOptions = {}): HTMLElement {
  const { titles = {}, quizDue = [], onSeek, onQuizMarker } = options;
  const duration = manifest.durationSec;

  const root = document.createElement("div");
  root.className = "lk-timeline";
  root.dataset.duration = String(duration);

  const track = document.createElement("div");
  track.className = "lk-timeline__track";
  track.addEventListener("click", (event) => {
    if (!onSeek) return;
    const bounds = track.getBoundingClientRect();
    if (bounds.width <= 0) return;
    const frac = Math.min(1, Math.max(0, (event.clientX - bounds.left) / bounds.width));
    onSeek(frac * duration);
  });
  root.appendChild(track);

  for (const section of manifest.sections) {
    const title = titles[section.id] ?? section.id;
    const span = document.createElement("div");
    span.className = "lk-timeline__span";
    span.dataset.sectionId = section.id;
    span.style.left = pct(section.startSec / duration);
    span.style.width = pct((section.endSec - section.startSec) / duration);
    span.title = title; // hover tooltip

    const label = document.createElement("span");
    label.className = "lk-timeline__label";
    label.textContent = title;
    span.appendChild(label);
    track.appendChild(span);
  }

  for (const section of manifest.sections) {
    const marker = document.createElement("button");
    marker.type = "button";
    marker.className = "lk-quiz-marker";
    if (quizDue.includes(section.id)) marker.classList.add("lk-quiz-marker--due");
    marker.dataset.sectionId = section.id;
    marker.style.left = pct(section.endSec / duration);
    const title = titles[section.id] ?? section.id;
    marker.setAttribute("aria-label", `Quiz: ${title}`);
    marker.title = `Quiz: ${title}`;
    marker.textContent = "?";
    marker.addEventListener("click", (event) => {
      event.stopPropagation();
      onQuizMarker?.(section.id);
    });
    track.appendChild(marker);
  }

  return root;
}
