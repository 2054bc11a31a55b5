"""On-disk persistence of lecture bundles.

Layout under the bundle root:

    manifest.json
    sections/000/slide.png
    sections/000/content.json
    sections/000/quiz.json
    sections/000/highlights.json
    examples/<name>.html

JSON files are written canonically (sorted keys, two-space indent, UTF-8,
trailing newline) so that saving the same bundle twice is byte-identical.
"""

from __future__ import annotations

import json
import logging
import shutil
from pathlib import Path

from ..errors import BundleIoError, MissingManifest, SchemaViolation
from ..jsonio import read_json, write_json
from .model import (
    ExampleAsset,
    HighlightEntry,
    LectureBundle,
    QuizItem,
    Section,
    TranscriptSegment,
    validate_quiz_item,
)

log = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


def _section_dir(index: int) -> str:
    return f"sections/{index:03d}"


def _read_json_checked(path: Path, field: str) -> object:
    if not path.is_file():
        raise SchemaViolation(field, f"missing file {path.name}")
    try:
        return read_json(path)
    except json.JSONDecodeError as exc:
        raise SchemaViolation(field, f"invalid JSON in {path.name}: {exc}") from None
    except UnicodeDecodeError:
        raise SchemaViolation(field, f"{path.name} is not UTF-8 text") from None
    except OSError as exc:
        raise BundleIoError(f"cannot read {path}: {exc}") from None


def _section_from_disk(root: Path, entry: dict, index: int) -> Section:
    where = f"sections[{index}]"
    rel = entry.get("dir")
    if not isinstance(rel, str) or not rel:
        raise SchemaViolation(where, "manifest entry missing section dir")
    sdir = root / rel

    content = _read_json_checked(sdir / "content.json", where)
    if not isinstance(content, dict):
        raise SchemaViolation(where, "content.json must hold an object")
    quiz_raw = _read_json_checked(sdir / "quiz.json", where)
    if not isinstance(quiz_raw, dict):
        raise SchemaViolation(where, "quiz.json must hold an object")
    highlights_raw = _read_json_checked(sdir / "highlights.json", where)
    if not isinstance(highlights_raw, list):
        raise SchemaViolation(where, "highlights.json must hold a list")

    try:
        section = Section(
            id=str(content["id"]),
            start_sec=float(content["startSec"]),
            end_sec=float(content["endSec"]),
            slide_image_ref=str(content["slideImageRef"]),
            title=str(content.get("title", "")),
            main_concepts=[str(x) for x in content.get("mainConcepts", [])],
            key_points=[str(x) for x in content.get("keyPoints", [])],
            equations=None
            if content.get("equations") is None
            else [str(x) for x in content["equations"]],
            diagrams=None
            if content.get("diagrams") is None
            else [str(x) for x in content["diagrams"]],
            content_fingerprint=str(content.get("contentFingerprint", "")),
            reference_resolution=_resolution(content.get("referenceResolution"), where),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaViolation(where, f"bad content.json: {exc}") from None

    transcript = content.get("transcript", [])
    if not isinstance(transcript, list):
        raise SchemaViolation(where, "transcript must be a list")
    section.transcript = [
        TranscriptSegment.from_dict(seg, f"{where}.transcript[{i}]")
        for i, seg in enumerate(transcript)
    ]

    bank: dict[int, list[QuizItem]] = {}
    for key, items in quiz_raw.items():
        try:
            level = int(key)
        except ValueError:
            raise SchemaViolation(f"{where}.quizzes", f"non-numeric bank key {key!r}") from None
        if not isinstance(items, list):
            raise SchemaViolation(f"{where}.quizzes", f"bank level {key} must hold a list")
        bank[level] = [validate_quiz_item(item) for item in items]
    section.quizzes = bank

    section.highlights = [
        HighlightEntry.from_dict(h, f"{where}.highlights[{i}]")
        for i, h in enumerate(highlights_raw)
    ]

    if entry.get("id") is not None and str(entry["id"]) != section.id:
        raise SchemaViolation(where, "manifest id disagrees with content.json")
    return section


def _resolution(raw: object, where: str) -> tuple[int, int]:
    if raw is None:
        return (1000, 1000)
    if (
        not isinstance(raw, list)
        or len(raw) != 2
        or not all(isinstance(v, int) and v > 0 for v in raw)
    ):
        raise SchemaViolation(where, "referenceResolution must be [width, height]")
    return (raw[0], raw[1])


def load_bundle(path: str | Path) -> LectureBundle:
    """Read and fully validate a bundle directory.

    Raises MissingManifest, SchemaViolation, DanglingReference or
    BundleIoError; never lets a malformed input crash with an untyped error.
    """
    root = Path(path)
    manifest_path = root / MANIFEST_NAME
    if not manifest_path.is_file():
        raise MissingManifest(str(manifest_path))
    manifest = _read_json_checked(manifest_path, "manifest")
    if not isinstance(manifest, dict):
        raise SchemaViolation("manifest", "top level must be an object")

    try:
        bundle = LectureBundle(
            id=str(manifest["id"]),
            title=str(manifest["title"]),
            video_ref=str(manifest.get("videoRef", "")),
            duration_sec=float(manifest["durationSec"]),
            created_at=str(manifest.get("createdAt", "")),
            root=root,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaViolation("manifest", f"bad manifest: {exc}") from None

    entries = manifest.get("sections", [])
    if not isinstance(entries, list):
        raise SchemaViolation("manifest", "sections must be a list")
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict):
            raise SchemaViolation(f"sections[{i}]", "manifest entry must be an object")
        bundle.sections.append(_section_from_disk(root, entry, i))

    examples_raw = manifest.get("examples", [])
    if not isinstance(examples_raw, list):
        raise SchemaViolation("manifest", "examples must be a list")
    bundle.examples = [
        ExampleAsset.from_dict(raw, f"examples[{i}]") for i, raw in enumerate(examples_raw)
    ]

    bundle.validate(check_files=True)
    return bundle


def save_bundle(bundle: LectureBundle, path: str | Path) -> Path:
    """Write a validated bundle to ``path``, copying referenced assets in.

    References are rewritten to the canonical bundle-relative layout, so a
    load/save round trip is byte-stable.
    """
    dest = Path(path)
    bundle.validate(check_files=True)
    dest.mkdir(parents=True, exist_ok=True)

    manifest_sections = []
    new_sections = []
    for i, section in enumerate(bundle.sections):
        rel_dir = _section_dir(i)
        sdir = dest / rel_dir
        sdir.mkdir(parents=True, exist_ok=True)
        slide_rel = f"{rel_dir}/slide.png"
        src_slide = bundle.resolve(section.slide_image_ref)
        dst_slide = dest / slide_rel
        if src_slide.resolve() != dst_slide.resolve():
            shutil.copyfile(src_slide, dst_slide)

        content = {
            "id": section.id,
            "startSec": section.start_sec,
            "endSec": section.end_sec,
            "slideImageRef": slide_rel,
            "title": section.title,
            "mainConcepts": section.main_concepts,
            "keyPoints": section.key_points,
            "equations": section.equations,
            "diagrams": section.diagrams,
            "contentFingerprint": section.content_fingerprint,
            "referenceResolution": list(section.reference_resolution),
            "transcript": [seg.to_dict() for seg in section.transcript],
        }
        write_json(sdir / "content.json", content)
        quiz = {
            str(level): [item.to_dict() for item in items]
            for level, items in sorted(section.quizzes.items())
        }
        write_json(sdir / "quiz.json", quiz)
        write_json(sdir / "highlights.json", [h.to_dict() for h in section.highlights])

        manifest_sections.append(
            {
                "id": section.id,
                "startSec": section.start_sec,
                "endSec": section.end_sec,
                "dir": rel_dir,
            }
        )
        updated = Section(**{**section.__dict__, "slide_image_ref": slide_rel})
        new_sections.append(updated)

    new_examples = []
    if bundle.examples:
        (dest / "examples").mkdir(exist_ok=True)
    for asset in bundle.examples:
        src_html = bundle.resolve(asset.html_ref)
        rel = f"examples/{src_html.name}"
        dst_html = dest / rel
        if src_html.resolve() != dst_html.resolve():
            shutil.copyfile(src_html, dst_html)
        new_examples.append(
            ExampleAsset(
                section_id=asset.section_id,
                trigger_sec=asset.trigger_sec,
                html_ref=rel,
                title=asset.title,
            )
        )

    manifest = {
        "id": bundle.id,
        "title": bundle.title,
        "videoRef": bundle.video_ref,
        "durationSec": bundle.duration_sec,
        "createdAt": bundle.created_at,
        "sections": manifest_sections,
        "examples": [a.to_dict() for a in new_examples],
    }
    write_json(dest / MANIFEST_NAME, manifest)

    bundle.sections = new_sections
    bundle.examples = new_examples
    bundle.root = dest
    log.info("saved bundle %s (%d sections) to %s", bundle.id, len(new_sections), dest)
    return dest
