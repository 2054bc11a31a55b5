// Page bootstrap: resolve the service base URL, pick a lecture, create a
// session and mount the player. Query params: ?server=http://host:port
// (defaults to same origin), ?lecture=<bundleId>, ?interests=a,b,c.

import { LectureApi } from "./api";
import { Player } from "./player";
import { flattenTranscript } from "./subtitles";
import type { SectionContent } from "./types";

const POSITION_REPORT_SEC = 2;

async function boot(): Promise<void> {
  const mount = document.getElementById("app");
  if (!mount) throw new Error("missing #app mount node");

  const params = new URLSearchParams(location.search);
  const base = (params.get("server") ?? "").replace(/\/$/, "");
  const api = new LectureApi(base);

  const lectures = await api.lectures();
  if (lectures.length === 0) {
    mount.textContent = "No lectures available. Run the preprocessor first.";
    return;
  }
  const bundleId = params.get("lecture") ?? lectures[0]!.id;
  const manifest = await api.manifest(bundleId);

  const contents: SectionContent[] = await Promise.all(
    manifest.sections.map((_section, index) => api.sectionContent(bundleId, index)),
  );
  const titles = Object.fromEntries(contents.map((c) => [c.id, c.title]));
  const cues = flattenTranscript(contents);

  const video = document.createElement("video");
  video.src = api.videoUrl(bundleId);
  video.addEventListener("error", () => {
    // Bundles without a copied video fall back to the first slide image.
    const img = document.createElement("img");
    img.className = "lk-player__slide-fallback";
    img.src = api.slideUrl(bundleId, 0);
    img.alt = manifest.title;
    video.replaceWith(img);
  });

  const interests = (params.get("interests") ?? "")
    .split(",")
    .map((s) => s.trim())
    .filter(Boolean);

  const player = await Player.create(
    { api, manifest, mount, titles, cues, video },
    { bundleId, interests },
  );

  let lastReported = 0;
  video.addEventListener("timeupdate", () => {
    if (video.currentTime - lastReported >= POSITION_REPORT_SEC) {
      lastReported = video.currentTime;
      void player.reportPosition(video.currentTime);
    }
  });
}

void boot().catch((error) => {
  const mount = document.getElementById("app");
  if (mount) mount.textContent = `Failed to start: ${String(error)}`;
});
