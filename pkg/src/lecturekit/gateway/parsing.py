"""Tolerant extraction of the single JSON value inside a model reply.

Providers wrap JSON in code fences, prepend prose, or leave trailing commas.
The parser strips fences, scans for balanced top-level JSON values with a
string-aware walker, repairs trailing commas, and then validates against the
template's reply schema. Exactly one JSON value must survive.
"""

from __future__ import annotations

import json
import re
from typing import Any, Optional

import jsonschema

from ..errors import MultipleJsonValues, NoJsonFound, SchemaMismatch

_FENCE_LINE = re.compile(r"^\s*```[\w-]*\s*$")


def strip_fences(text: str) -> str:
    return "\n".join(line for line in text.splitlines() if not _FENCE_LINE.match(line))


def _balanced_end(text: str, start: int) -> Optional[int]:
    """Index one past the span of the JSON value opening at ``start``."""
    opener = text[start]
    closer = "}" if opener == "{" else "]"
    depth = 0
    in_string = False
    escaped = False
    for i in range(start, len(text)):
        ch = text[i]
        if in_string:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == '"':
                in_string = False
            continue
        if ch == '"':
            in_string = True
        elif ch in "{[":
            depth += 1
        elif ch in "}]":
            depth -= 1
            if depth == 0:
                return i + 1 if ch == closer else None
            if depth < 0:
                return None
    return None


def remove_trailing_commas(text: str) -> str:
    out = []
    in_string = False
    escaped = False
    pending_comma = -1
    for ch in text:
        if in_string:
            out.append(ch)
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == '"':
                in_string = False
            continue
        if ch == '"':
            in_string = True
            out.append(ch)
            pending_comma = -1
            continue
        if ch == ",":
            pending_comma = len(out)
            out.append(ch)
            continue
        if ch in "}]" and pending_comma >= 0:
            del out[pending_comma]
            out.append(ch)
            pending_comma = -1
            continue
        if not ch.isspace():
            pending_comma = -1
        out.append(ch)
    return "".join(out)


def extract_json_values(text: str) -> list[Any]:
    """All parseable top-level JSON objects/arrays, left to right."""
    values = []
    i = 0
    n = len(text)
    while i < n:
        if text[i] in "{[":
            end = _balanced_end(text, i)
            if end is not None:
                candidate = remove_trailing_commas(text[i:end])
                try:
                    values.append(json.loads(candidate))
                except json.JSONDecodeError:
                    i += 1
                    continue
                i = end
                continue
        i += 1
    return values


def parse_structured(text: str, schema: Optional[dict]) -> Any:
    """Extract the single JSON value from ``text`` and validate it.

    Raises NoJsonFound, MultipleJsonValues or SchemaMismatch.
    """
    values = extract_json_values(strip_fences(text))
    if not values:
        raise NoJsonFound()
    if len(values) > 1:
        raise MultipleJsonValues(len(values))
    value = values[0]
    if schema is not None:
        try:
            jsonschema.validate(value, schema)
        except jsonschema.ValidationError as exc:
            path = ".".join(str(p) for p in exc.absolute_path)
            raise SchemaMismatch(path or "$", exc.message) from None
    return value
