// Control bar: playback controls plus the session toggles. Server-backed
// toggles (play state, highlight, difficulty, summary) are derived from the
// last acked snapshot, never set optimistically.

import type { SessionView } from "./state";
import type { SessionMode } from "./types";

// Client-side playback facts owned by the <video> element.
export type LocalPlayback = {
  volume: number;
  muted: boolean;
  speed: number;
  subtitlesOn: boolean;
};

export type ControlBarState = {
  playing: boolean;
  volume: number;
  muted: boolean;
  subtitlesOn: boolean;
  speed: number;
  highlightOn: boolean;
  difficulty: number;
  onBreak: boolean;
  summaryOpen: boolean;
  mode: SessionMode | null;
};

export type ControlHandlers = {
  onPlayPause?: () => void;
  onVolume?: (volume: number) => void;
  onMute?: (muted: boolean) => void;
  onSubtitles?: (on: boolean) => void;
  onSpeed?: (speed: number) => void;
  onHighlight?: (enabled: boolean) => void;
  onBreak?: (minutes: number) => void;
  onExamples?: () => void;
  onSummary?: () => void;
  onDifficulty?: (level: number) => void;
};

export const SPEED_STEPS = [0.75, 1, 1.25, 1.5, 2] as const;
export const BREAK_MINUTES = [1, 3, 5] as const;

export function deriveControlBarState(view: SessionView, local: LocalPlayback): ControlBarState {
  return {
    playing: view.playing,
    volume: local.volume,
    muted: local.muted,
    subtitlesOn: local.subtitlesOn,
    speed: local.speed,
    highlightOn: view.session?.highlightEnabled ?? false,
    difficulty: view.session?.difficulty ?? 3,
    onBreak: view.breakState !== null,
    summaryOpen: view.summaryOpen,
    mode: view.session?.mode ?? null,
  };
}

function toggleButton(
  className: string,
  label: string,
  pressed: boolean,
  onClick: () => void,
): HTMLButtonElement {
  const button = document.createElement("button");
  button.type = "button";
  button.className = className;
  button.textContent = label;
  button.setAttribute("aria-pressed", String(pressed));
  button.addEventListener("click", onClick);
  return button;
}

export function renderControlBar(
  state: ControlBarState,
  handlers: ControlHandlers = {},
): HTMLElement {
  const bar = document.createElement("div");
  bar.className = "lk-controls";
  if (state.mode) bar.dataset.mode = state.mode;

  const play = document.createElement("button");
  play.type = "button";
  play.className = "lk-controls__play";
  play.textContent = state.playing ? "Pause" : "Play";
  play.setAttribute("aria-pressed", String(state.playing));
  play.addEventListener("click", () => handlers.onPlayPause?.());
  bar.appendChild(play);

  const volume = document.createElement("input");
  volume.type = "range";
  volume.className = "lk-controls__volume";
  volume.min = "0";
  volume.max = "1";
  volume.step = "0.05";
  volume.value = String(state.volume);
  volume.addEventListener("input", () => handlers.onVolume?.(Number(volume.value)));
  bar.appendChild(volume);

  bar.appendChild(
    toggleButton("lk-controls__mute", state.muted ? "Unmute" : "Mute", state.muted, () =>
      handlers.onMute?.(!state.muted),
    ),
  );

  bar.appendChild(
    toggleButton("lk-controls__subtitles", "Subtitles", state.subtitlesOn, () =>
      handlers.onSubtitles?.(!state.subtitlesOn),
    ),
  );

  const speed = document.createElement("select");
  speed.className = "lk-controls__speed";
  for (const step of SPEED_STEPS) {
    const option = document.createElement("option");
    option.value = String(step);
    option.textContent = `${step}x`;
    option.selected = step === state.speed;
    speed.appendChild(option);
  }
  speed.addEventListener("change", () => handlers.onSpeed?.(Number(speed.value)));
  bar.appendChild(speed);

  bar.appendChild(
    toggleButton("lk-controls__highlight", "Highlight", state.highlightOn, () =>
      handlers.onHighlight?.(!state.highlightOn),
    ),
  );

  const breaks = document.createElement("span");
  breaks.className = "lk-controls__breaks";
  breaks.dataset.active = String(state.onBreak);
  for (const minutes of BREAK_MINUTES) {
    const button = document.createElement("button");
    button.type = "button";
    button.className = "lk-controls__break";
    button.dataset.minutes = String(minutes);
    button.textContent = `Break ${minutes}m`;
    button.disabled = state.onBreak;
    button.addEventListener("click", () => handlers.onBreak?.(minutes));
    breaks.appendChild(button);
  }
  bar.appendChild(breaks);

  const examples = document.createElement("button");
  examples.type = "button";
  examples.className = "lk-controls__examples";
  examples.textContent = "Examples";
  examples.addEventListener("click", () => handlers.onExamples?.());
  bar.appendChild(examples);

  bar.appendChild(
    toggleButton("lk-controls__summary", "Summary", state.summaryOpen, () =>
      handlers.onSummary?.(),
    ),
  );

  const difficulty = document.createElement("input");
  difficulty.type = "range";
  difficulty.className = "lk-controls__difficulty";
  difficulty.min = "1";
  difficulty.max = "5";
  difficulty.step = "1";
  difficulty.value = String(state.difficulty);
  difficulty.setAttribute("aria-label", "Difficulty");
  difficulty.addEventListener("change", () => handlers.onDifficulty?.(Number(difficulty.value)));
  bar.appendChild(difficulty);

  return bar;
}
