// Subtitles sourced from the bundle transcript: section content documents
// are flattened into one sorted cue list and looked up by playback time.

import type { SectionContent, TranscriptSegment } from "./types";

export function flattenTranscript(contents: readonly SectionContent[]): TranscriptSegment[] {
  const cues = contents.flatMap((content) => content.transcript);
  return [...cues].sort((a, b) => a.startSec - b.startSec || a.endSec - b.endSec);
}

// Active cue at time t (startSec <= t < endSec). Bundle transcripts are
// non-overlapping, so binary search over start times suffices.
export function activeCue(
  cues: readonly TranscriptSegment[],
  tSec: number,
): TranscriptSegment | null {
  let lo = 0;
  let hi = cues.length - 1;
  let found: TranscriptSegment | null = null;
  while (lo <= hi) {
    const mid = (lo + hi) >> 1;
    const cue = cues[mid]!;
    if (cue.startSec <= tSec) {
      if (tSec < cue.endSec) found = cue;
      lo = mid + 1;
    } else {
      hi = mid - 1;
    }
  }
  return found;
}

export function renderSubtitle(cue: TranscriptSegment | null): HTMLElement {
  const el = document.createElement("div");
  el.className = "lk-subtitle";
  if (cue) {
    el.textContent = cue.text;
  } else {
    el.classList.add("lk-subtitle--empty");
  }
  return el;
}
