"""Prompt template registry and renderer.

Templates ship as plain-text package data and are treated as immutable:
rendering substitutes only the ``${...}`` placeholder sites and leaves every
other byte untouched. Placeholder expressions use JS template-literal
semantics, so the registry maps each exact expression string to a resolver
that reproduces that behavior (``x || null`` renders the literal ``null``
when the binding is missing or empty, ternaries pick between labels, and
numbers render without a trailing ``.0``).
"""

from __future__ import annotations

from importlib import resources
from typing import Any, Callable, Mapping

from ..errors import UnboundPlaceholder

TEMPLATE_FILES = {
    "sameSlide": "same_slide.txt",
    "slideExtract": "slide_extract.txt",
    "quizGen": "quiz_gen.txt",
    "highlightGen": "highlight_gen.txt",
    "clarify": "clarify.txt",
    "visualKeywords": "visual_keywords.txt",
    "breakStory": "break_story.txt",
}

TEMPLATE_IDS = tuple(TEMPLATE_FILES)

# Templates whose replies are structured JSON; the rest return plain speech text.
JSON_TEMPLATES = frozenset({"sameSlide", "slideExtract", "quizGen", "highlightGen", "visualKeywords"})

# Templates that may carry image attachments on the request.
IMAGE_TEMPLATES = frozenset({"sameSlide", "slideExtract", "highlightGen", "visualKeywords"})

_cache: dict[str, str] = {}


def load_template(template_id: str) -> str:
    if template_id not in TEMPLATE_FILES:
        raise KeyError(f"unknown template id {template_id!r}")
    if template_id not in _cache:
        name = TEMPLATE_FILES[template_id]
        _cache[template_id] = (
            resources.files("lecturekit.gateway").joinpath("prompts").joinpath(name).read_text("utf-8")
        )
    return _cache[template_id]


def scan_placeholders(text: str) -> list[tuple[int, int, str]]:
    """Locate top-level ``${...}`` spans as (start, end, inner expression).

    Depth counting treats every brace as structural; the shipped templates
    keep quoted strings brace-free, which this relies on.
    """
    spans = []
    i = 0
    n = len(text)
    while i < n - 1:
        if text[i] == "$" and text[i + 1] == "{":
            depth = 1
            j = i + 2
            while j < n and depth:
                if text[j] == "{":
                    depth += 1
                elif text[j] == "}":
                    depth -= 1
                j += 1
            if depth:
                break  # unterminated; leave the tail as literal text
            spans.append((i, j, text[i + 2 : j - 1]))
            i = j
        else:
            i += 1
    return spans


def _js_str(value: Any) -> str:
    """Render a bound value the way a JS template literal would."""
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return str(int(value)) if value.is_integer() else repr(value)
    if isinstance(value, (list, tuple)):
        return ",".join(_js_str(v) for v in value)
    return str(value)


def _truthy(value: Any) -> bool:
    # JS falsiness for the types bindings actually take: None, "", 0, False.
    # Lists count as truthy even when empty (JS arrays are objects).
    if isinstance(value, (list, tuple)):
        return True
    return bool(value)


def _required(key: str) -> Callable[[Mapping[str, Any]], str]:
    def resolve(b: Mapping[str, Any]) -> str:
        if key not in b or b[key] is None:
            raise UnboundPlaceholder(key)
        return _js_str(b[key])

    return resolve


def _required_join(key: str) -> Callable[[Mapping[str, Any]], str]:
    def resolve(b: Mapping[str, Any]) -> str:
        if key not in b or b[key] is None:
            raise UnboundPlaceholder(key)
        value = b[key]
        if isinstance(value, str):
            return value
        return ", ".join(str(v) for v in value)

    return resolve


def _or_default(key: str, default: str) -> Callable[[Mapping[str, Any]], str]:
    def resolve(b: Mapping[str, Any]) -> str:
        value = b.get(key)
        return _js_str(value) if _truthy(value) else default

    return resolve


def _optional_prefixed(key: str, prefix: str) -> Callable[[Mapping[str, Any]], str]:
    # `${x ? `Prefix: ${x.join(', ')}` : ''}`: emits iff the field is bound
    # and non-null; an empty list still emits the bare prefix.
    def resolve(b: Mapping[str, Any]) -> str:
        value = b.get(key)
        if value is None:
            return ""
        items = [value] if isinstance(value, str) else list(value)
        return f"{prefix}: " + ", ".join(str(v) for v in items)

    return resolve


_DIFFICULTY_LABELS = {
    1: "very easy - basic recall",
    2: "easy - simple understanding",
    3: "medium - application",
    4: "hard - analysis",
}


def _difficulty(b: Mapping[str, Any]) -> str:
    if "difficulty" not in b or b["difficulty"] is None:
        raise UnboundPlaceholder("difficulty")
    value = b["difficulty"]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        return str(value)
    level = int(value)
    label = _DIFFICULTY_LABELS.get(level, "very hard - synthesis/evaluation")
    return f"{_js_str(value)}/5 ({label})"


def _break_words(b: Mapping[str, Any]) -> str:
    if "breakDuration" not in b or b["breakDuration"] is None:
        raise UnboundPlaceholder("breakDuration")
    return _js_str(b["breakDuration"] * 150)


# Exact placeholder expressions appearing in each shipped template, mapped to
# the resolver that reproduces the original substitution behavior.
RULES: dict[str, dict[str, Callable[[Mapping[str, Any]], str]]] = {
    "sameSlide": {},
    "slideExtract": {},
    "visualKeywords": {},
    "quizGen": {
        "questionsPerSection": _required("questionsPerSection"),
        "slideData.title": _required("title"),
        "slideData.content.mainConcepts.join(', ')": _required_join("mainConcepts"),
        "slideData.content.keyPoints.join(', ')": _required_join("keyPoints"),
        "slideData.content.equations ? `Equations: ${slideData.content.equations.join(', ')}` : ''": _optional_prefixed(
            "equations", "Equations"
        ),
        "slideData.content.diagrams ? `Diagrams: ${slideData.content.diagrams.join(', ')}` : ''": _optional_prefixed(
            "diagrams", "Diagrams"
        ),
        "slideData.transcript": _required("transcript"),
        "typeof difficulty === 'number' ? `${difficulty}/5 (${difficulty === 1 ? 'very easy - basic recall' : difficulty === 2 ? 'easy - simple understanding' : difficulty === 3 ? 'medium - application' : difficulty === 4 ? 'hard - analysis' : 'very hard - synthesis/evaluation'})` : difficulty": _difficulty,
        "questionTypes.join(', ')": _required_join("questionTypes"),
    },
    "highlightGen": {
        "slideTranscript": _required("slideTranscript"),
    },
    "clarify": {
        "currentVideoName || null": _or_default("currentVideoName", "null"),
        "summaryText || null": _or_default("summaryText", "null"),
        "currentSlideContent || null": _or_default("currentSlideContent", "null"),
    },
    "breakStory": {
        "currentVideoName": _required("currentVideoName"),
        "breakDuration": _required("breakDuration"),
        "breakDuration * 150": _break_words,
        "summaryText || ''": _or_default("summaryText", ""),
        "currentSlideContent || ''": _or_default("currentSlideContent", ""),
        "userInterests": _required("userInterests"),
    },
}


def render_prompt(template_id: str, bindings: Mapping[str, Any] | None = None) -> str:
    """Substitute placeholder sites; every byte outside them is preserved."""
    text = load_template(template_id)
    rules = RULES[template_id]
    bindings = bindings or {}
    out = []
    cursor = 0
    for start, end, expr in scan_placeholders(text):
        rule = rules.get(expr)
        if rule is None:
            raise UnboundPlaceholder(expr)
        out.append(text[cursor:start])
        out.append(rule(bindings))
        cursor = end
    out.append(text[cursor:])
    return "".join(out)


def required_bindings(template_id: str) -> frozenset[str]:
    """Binding keys that must be present to render the template."""
    return {
        "sameSlide": frozenset(),
        "slideExtract": frozenset(),
        "visualKeywords": frozenset(),
        "quizGen": frozenset(
            {"questionsPerSection", "title", "mainConcepts", "keyPoints", "transcript", "difficulty", "questionTypes"}
        ),
        "highlightGen": frozenset({"slideTranscript"}),
        "clarify": frozenset(),
        "breakStory": frozenset({"currentVideoName", "breakDuration", "userInterests"}),
    }[template_id]
