"""Command-line entry points: preprocess a video, serve bundles, inspect layout.

``preprocess`` turns a recording plus transcript into a lecture bundle,
``serve`` exposes bundles over HTTP, and ``inspect layout`` dumps the
content grid and chosen free region for a single slide so placement
decisions can be debugged offline.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from ..errors import LectureKitError
from ..gateway import Gateway, MockProvider, provider_from_env
from ..jsonio import canonical_dumps


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lecturekit",
        description="Preprocess lecture videos and serve interactive sessions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pre = sub.add_parser("preprocess", help="turn a video and transcript into a bundle")
    pre.add_argument("--video", required=True, help="path to the lecture recording")
    pre.add_argument("--transcript", required=True, help="path to the transcript (.srt or .vtt)")
    pre.add_argument("--examples", default=None, help="directory of interactive HTML examples")
    pre.add_argument("--out", default="bundle", help="output bundle directory")
    pre.add_argument("--interval", type=float, default=2.0, help="frame sampling interval in seconds")
    pre.add_argument("--questions-per-section", type=int, default=3, help="quiz items per difficulty level")
    pre.add_argument("--mock", action="store_true", help="use the deterministic offline model provider")

    srv = sub.add_parser("serve", help="serve bundles and sessions over HTTP")
    srv.add_argument("--bundle-dir", required=True, help="directory containing one or more bundles")
    srv.add_argument("--port", type=int, default=None, help="listen port (default: env PORT or 8000)")
    srv.add_argument("--host", default="127.0.0.1", help="listen address")
    srv.add_argument("--mock", action="store_true", help="force offline providers; no network egress")
    srv.add_argument("--clock-speed", type=float, default=None, help="wall-clock multiplier for timers")

    ins = sub.add_parser("inspect", help="inspection utilities")
    ins_sub = ins.add_subparsers(dest="inspect_command", required=True)
    lay = ins_sub.add_parser("layout", help="show the content grid and free region for a slide")
    lay.add_argument("--slide", required=True, help="path to a slide PNG")
    lay.add_argument("--anchor", default="0.5,0.5", help="anchor point as x,y in normalized coordinates")
    lay.add_argument("--text", default="", help="response text to plan placement for")
    lay.add_argument("--json-out", default=None, help="write the report JSON to this file")
    lay.add_argument("--region-png", default=None, help="write an annotated copy of the slide here")

    return parser


def _cmd_preprocess(args: argparse.Namespace) -> int:
    from ..pipeline import PipelineConfig, build_bundle

    use_mock = args.mock or os.environ.get("LLM_MOCK") == "1"
    provider = MockProvider() if use_mock else provider_from_env()
    config = PipelineConfig(
        interval_sec=args.interval,
        questions_per_section=args.questions_per_section,
    )
    bundle = build_bundle(
        args.video,
        args.transcript,
        args.examples,
        Gateway(provider),
        args.out,
        config=config,
    )
    print(f"wrote bundle {bundle.id!r} with {len(bundle.sections)} sections to {args.out}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .app import create_app

    port = args.port if args.port is not None else int(os.environ.get("PORT", "8000"))
    bundle_dir = os.environ.get("BUNDLE_DIR", args.bundle_dir)
    app = create_app(bundle_dir, mock=args.mock or None, clock_speed=args.clock_speed)
    uvicorn.run(app, host=args.host, port=port, log_level="warning")
    return 0


def _parse_anchor(raw: str) -> tuple[float, float]:
    parts = raw.split(",")
    if len(parts) != 2:
        raise LectureKitError(f"anchor must be x,y; got {raw!r}")
    return (float(parts[0]), float(parts[1]))


def _cmd_inspect_layout(args: argparse.Namespace) -> int:
    from ..layout import detect_content_boxes, plan_overlay, rasterize, select_free_region

    anchor = _parse_anchor(args.anchor)
    boxes = detect_content_boxes(args.slide)
    grid = rasterize(boxes, cols=24, rows=14)
    region = select_free_region(grid, anchor)
    plan = plan_overlay(args.slide, anchor, args.text)

    report = {
        "slide": str(args.slide),
        "anchor": list(anchor),
        "contentBoxes": [list(b) for b in boxes],
        "occupiedCells": int(sum(sum(row) for row in grid.cells)),
        "grid": {"cols": grid.cols, "rows": grid.rows},
        "region": plan.to_json()["region"],
        "plan": plan.to_json(),
    }
    rendered = canonical_dumps(report, indent=2) + "\n"
    if args.json_out:
        Path(args.json_out).write_text(rendered, encoding="utf-8")
        print(f"wrote {args.json_out}")
    else:
        sys.stdout.write(rendered)

    if args.region_png:
        from PIL import Image, ImageDraw

        annotated = Image.open(args.slide).convert("RGB")
        draw = ImageDraw.Draw(annotated)
        w, h = annotated.size
        for x0, y0, x1, y1 in boxes:
            draw.rectangle((x0 * w, y0 * h, x1 * w, y1 * h), outline=(255, 64, 64), width=2)
        rx0, ry0, rx1, ry1 = region.rect
        draw.rectangle((rx0 * w, ry0 * h, rx1 * w, ry1 * h), outline=(64, 220, 64), width=3)
        annotated.save(args.region_png)
        print(f"wrote {args.region_png}")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "preprocess":
            return _cmd_preprocess(args)
        if args.command == "serve":
            return _cmd_serve(args)
        if args.command == "inspect" and args.inspect_command == "layout":
            return _cmd_inspect_layout(args)
    except LectureKitError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
