// Summary canvas: fixed card coordinates under pan/zoom, badges, replay.

import { describe, expect, it } from "vitest";
import {
  MAX_ZOOM,
  MIN_ZOOM,
  initialViewport,
  panViewport,
  renderSummaryCanvas,
  zoomViewport,
} from "../src/summaryCanvas";
import type { InteractionRecord, SummaryDocument } from "../src/types";

const doc: SummaryDocument = {
  sessionId: "sess-1",
  sections: [
    { sectionId: "s0", title: "Atomic Structure", columnIndex: 0, x: 0, width: 480, cardCount: 2 },
    { sectionId: "s1", title: "Inside the Nucleus", columnIndex: 1, x: 496, width: 480, cardCount: 1 },
  ],
  canvas: [
    { recordRef: 0, x: 0, y: 0, w: 480, h: 120, kind: "question", replayText: "An answer." },
    { recordRef: 1, x: 0, y: 136, w: 480, h: 96, kind: "quizAnswer", replayText: "strong" },
    { recordRef: 2, x: 496, y: 0, w: 480, h: 96, kind: "note", replayText: null },
  ],
};

function record(kind: string, extra: Record<string, unknown> = {}): InteractionRecord {
  return { kind, videoSec: 1, wallSec: 2, selectedArea: null, prompt: null, response: null, extra };
}

const records = [record("question"), record("quizAnswer", { correct: true }), record("note")];

describe("viewport math", () => {
  it("pans additively", () => {
    const vp = panViewport(panViewport(initialViewport(), 10, -5), -4, 5);
    expect(vp).toEqual({ x: 6, y: 0, zoom: 1 });
  });

  it("zooms about the given origin, keeping that canvas point fixed", () => {
    const vp = { x: 20, y: 10, zoom: 1 };
    const origin = { x: 120, y: 60 };
    const canvasPoint = { x: (origin.x - vp.x) / vp.zoom, y: (origin.y - vp.y) / vp.zoom };

    const zoomed = zoomViewport(vp, 2, origin.x, origin.y);
    expect(zoomed.zoom).toBe(2);
    expect(canvasPoint.x * zoomed.zoom + zoomed.x).toBeCloseTo(origin.x);
    expect(canvasPoint.y * zoomed.zoom + zoomed.y).toBeCloseTo(origin.y);
  });

  it("clamps zoom to bounds", () => {
    expect(zoomViewport(initialViewport(), 1e-6, 0, 0).zoom).toBe(MIN_ZOOM);
    expect(zoomViewport(initialViewport(), 1e6, 0, 0).zoom).toBe(MAX_ZOOM);
  });
});

describe("renderSummaryCanvas", () => {
  it("keeps card layout coordinates fixed while the viewport moves", () => {
    const before = renderSummaryCanvas(doc, records, initialViewport());
    const after = renderSummaryCanvas(doc, records, { x: -150, y: 40, zoom: 2 });

    const cardStyles = (root: HTMLElement) =>
      [...root.querySelectorAll<HTMLElement>(".lk-card")].map((c) => c.getAttribute("style"));
    expect(cardStyles(after)).toEqual(cardStyles(before)); // pan/zoom never moves cards

    const surface = (root: HTMLElement) =>
      root.querySelector<HTMLElement>(".lk-summary-canvas__surface")!.style.transform;
    expect(surface(before)).toBe("translate(0px, 0px) scale(1)");
    expect(surface(after)).toBe("translate(-150px, 40px) scale(2)");
  });

  it("positions cards and columns at server canvas coordinates", () => {
    const root = renderSummaryCanvas(doc, records, initialViewport());
    const cards = [...root.querySelectorAll<HTMLElement>(".lk-card")];
    expect(cards[1]!.style.top).toBe("136px");
    expect(cards[2]!.style.left).toBe("496px");

    const columns = [...root.querySelectorAll<HTMLElement>(".lk-summary-column")];
    expect(columns.map((c) => c.querySelector(".lk-summary-column__title")!.textContent)).toEqual([
      "Atomic Structure",
      "Inside the Nucleus",
    ]);
  });

  it("badges quiz cards with correctness from the record", () => {
    const root = renderSummaryCanvas(doc, records, initialViewport());
    const quizCard = root.querySelector<HTMLElement>(".lk-card--quizAnswer")!;
    expect(quizCard.querySelector(".lk-card__badge")!.textContent).toBe("Correct");

    const wrong = renderSummaryCanvas(
      doc,
      [records[0]!, record("quizAnswer", { correct: false }), records[2]!],
      initialViewport(),
    );
    expect(wrong.querySelector(".lk-card--quizAnswer .lk-card__badge")!.textContent).toBe(
      "Incorrect",
    );

    const noRecords = renderSummaryCanvas(doc, null, initialViewport());
    expect(noRecords.querySelector(".lk-card--quizAnswer .lk-card__badge")).toBeNull();
  });

  it("wires replay buttons only for cards with replayable text", () => {
    const replays: number[] = [];
    const root = renderSummaryCanvas(doc, records, initialViewport(), {
      onReplay: (ref) => replays.push(ref),
    });
    const buttons = [...root.querySelectorAll<HTMLButtonElement>(".lk-card__replay")];
    expect(buttons.map((b) => b.dataset.recordRef)).toEqual(["0", "1"]); // note has no text
    buttons[0]!.click();
    expect(replays).toEqual([0]);
  });
});
