"""Canonical JSON serialization.

All bundle and log files go through these helpers so that saving the same
value twice produces byte-identical output (sorted keys, fixed separators,
UTF-8, trailing newline). Golden-file tests rely on this.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any


def canonical_dumps(value: Any, *, indent: int | None = 2) -> str:
    """Serialize ``value`` deterministically. ``indent=None`` gives one line."""
    if indent is None:
        return json.dumps(value, sort_keys=True, ensure_ascii=False, separators=(",", ":"))
    return json.dumps(value, sort_keys=True, ensure_ascii=False, indent=indent)


def write_json(path: Path, value: Any) -> None:
    path.write_text(canonical_dumps(value) + "\n", encoding="utf-8")


def read_json(path: Path) -> Any:
    return json.loads(path.read_text(encoding="utf-8"))
