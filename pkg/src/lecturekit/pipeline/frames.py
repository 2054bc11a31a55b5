"""Frame sampling from lecture videos.

A video is reduced to one frame per sampling interval: timestamps
``0, i, 2i, ...`` up to the video duration, plus the final frame when it
does not already fall on the grid.  A 600 s video sampled at 2 s therefore
yields 301 frames.  Each sampled frame is written to disk as PNG and
carries its 64-bit perceptual hash for cheap change detection.

Extraction is pluggable: the default extractor decodes with OpenCV, an
alternative shells out to ffmpeg when the binary is available.
"""

from __future__ import annotations

import shutil
import subprocess
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import cv2

from ..errors import ExtractionToolMissing, VideoUnreadable
from ..imaging import hash_file

# Grid points closer than this to the final frame are treated as the final
# frame itself, so the tail sample is not duplicated.
_TAIL_TOLERANCE_SEC = 1e-3


@dataclass(frozen=True)
class FrameSample:
    """One sampled frame: when it occurs, where it lives, how it looks."""

    timestamp_sec: float
    image_ref: Path
    perceptual_hash: int

    def to_json(self) -> dict:
        return {
            "timestampSec": self.timestamp_sec,
            "imageRef": str(self.image_ref),
            "perceptualHash": f"{self.perceptual_hash:016x}",
        }


class FrameExtractor(Protocol):
    """Decodes a video into still frames at requested timestamps."""

    def probe(self, video_ref: Path) -> tuple[float, float]:
        """Return ``(duration_sec, last_frame_sec)`` for the video."""
        ...

    def grab(self, video_ref: Path, timestamps: list[float], out_dir: Path) -> list[Path]:
        """Write one PNG per timestamp and return the paths in order."""
        ...


class OpenCVFrameExtractor:
    """Default extractor built on ``cv2.VideoCapture``."""

    def _open(self, video_ref: Path) -> cv2.VideoCapture:
        capture = cv2.VideoCapture(str(video_ref))
        if not capture.isOpened():
            capture.release()
            raise VideoUnreadable(str(video_ref))
        return capture

    def probe(self, video_ref: Path) -> tuple[float, float]:
        capture = self._open(video_ref)
        try:
            frame_count = int(capture.get(cv2.CAP_PROP_FRAME_COUNT))
            fps = capture.get(cv2.CAP_PROP_FPS)
        finally:
            capture.release()
        if frame_count <= 0 or fps <= 0:
            raise VideoUnreadable(str(video_ref))
        return frame_count / fps, (frame_count - 1) / fps

    def grab(self, video_ref: Path, timestamps: list[float], out_dir: Path) -> list[Path]:
        capture = self._open(video_ref)
        try:
            frame_count = int(capture.get(cv2.CAP_PROP_FRAME_COUNT))
            fps = capture.get(cv2.CAP_PROP_FPS)
            if frame_count <= 0 or fps <= 0:
                raise VideoUnreadable(str(video_ref))
            paths: list[Path] = []
            for k, t in enumerate(timestamps):
                index = min(int(round(t * fps)), frame_count - 1)
                frame = None
                # Some codecs refuse the very last index; back off until a
                # frame decodes.
                while index >= 0:
                    capture.set(cv2.CAP_PROP_POS_FRAMES, index)
                    ok, frame = capture.read()
                    if ok and frame is not None:
                        break
                    index -= 1
                if frame is None:
                    raise VideoUnreadable(str(video_ref))
                path = out_dir / f"frame_{k:05d}.png"
                if not cv2.imwrite(str(path), frame):
                    raise VideoUnreadable(str(video_ref))
                paths.append(path)
            return paths
        finally:
            capture.release()


class FfmpegFrameExtractor:
    """Extractor that shells out to ``ffmpeg``/``ffprobe``."""

    def __init__(self) -> None:
        if shutil.which("ffmpeg") is None or shutil.which("ffprobe") is None:
            raise ExtractionToolMissing("ffmpeg")

    def probe(self, video_ref: Path) -> tuple[float, float]:
        command = [
            "ffprobe", "-v", "error",
            "-select_streams", "v:0",
            "-show_entries", "stream=duration,avg_frame_rate",
            "-of", "csv=p=0",
            str(video_ref),
        ]
        try:
            out = subprocess.run(command, capture_output=True, text=True, check=True).stdout
            rate_text, duration_text = out.strip().split(",")[:2]
            num, _, den = rate_text.partition("/")
            fps = float(num) / float(den or 1)
            duration = float(duration_text)
        except (subprocess.CalledProcessError, ValueError, ZeroDivisionError) as exc:
            raise VideoUnreadable(str(video_ref)) from exc
        if duration <= 0 or fps <= 0:
            raise VideoUnreadable(str(video_ref))
        return duration, max(0.0, duration - 1.0 / fps)

    def grab(self, video_ref: Path, timestamps: list[float], out_dir: Path) -> list[Path]:
        paths: list[Path] = []
        for k, t in enumerate(timestamps):
            path = out_dir / f"frame_{k:05d}.png"
            command = [
                "ffmpeg", "-v", "error", "-y",
                "-ss", f"{t:.3f}", "-i", str(video_ref),
                "-frames:v", "1", str(path),
            ]
            result = subprocess.run(command, capture_output=True)
            if result.returncode != 0 or not path.exists():
                raise VideoUnreadable(str(video_ref))
            paths.append(path)
        return paths


def sample_timestamps(duration_sec: float, interval_sec: float, last_frame_sec: float | None = None) -> list[float]:
    """Return the sampling grid for a video of the given duration.

    Grid points sit at multiples of the interval from zero through the
    duration; the final frame is appended when the grid misses it.
    """
    if interval_sec <= 0:
        raise ValueError("interval_sec must be positive")
    if duration_sec <= 0:
        raise ValueError("duration_sec must be positive")
    count = int(duration_sec / interval_sec) + 1
    points = [k * interval_sec for k in range(count)]
    tail = duration_sec if last_frame_sec is None else last_frame_sec
    if tail - points[-1] > _TAIL_TOLERANCE_SEC:
        points.append(tail)
    return points


def sample_frames(
    video_ref: str | Path,
    interval_sec: float = 2.0,
    out_dir: str | Path = ".",
    extractor: FrameExtractor | None = None,
) -> list[FrameSample]:
    """Sample a video into hashed frames, one per interval plus the ends."""
    video_ref = Path(video_ref)
    out_dir = Path(out_dir)
    if not video_ref.exists():
        raise VideoUnreadable(str(video_ref))
    if extractor is None:
        extractor = OpenCVFrameExtractor()
    duration, last_frame = extractor.probe(video_ref)
    timestamps = sample_timestamps(duration, interval_sec, last_frame)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = extractor.grab(video_ref, timestamps, out_dir)
    return [
        FrameSample(timestamp_sec=t, image_ref=path, perceptual_hash=hash_file(path))
        for t, path in zip(timestamps, paths)
    ]
