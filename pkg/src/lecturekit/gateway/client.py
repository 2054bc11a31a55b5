"""Gateway client: render, call the provider, parse, retry on bad replies.

Structured templates get up to two repair retries: the original user text is
re-sent with a corrective suffix and the reply is parsed again. If every
attempt yields malformed output the last parse error is wrapped in
PersistentSchemaMismatch. Plain-text templates return the reply verbatim.
An optional call budget caps total provider calls per client instance.
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass
from typing import Any, Mapping, Optional

from ..errors import (
    BudgetExceeded,
    MultipleJsonValues,
    NoJsonFound,
    PersistentSchemaMismatch,
    SchemaMismatch,
)
from .parsing import parse_structured
from .providers import Provider, ProviderRequest
from .schemas import REPLY_SCHEMAS, check_reply
from .templates import JSON_TEMPLATES, render_prompt

log = logging.getLogger(__name__)

MAX_REPAIR_RETRIES = 2

REPAIR_SUFFIX = (
    "\n\nYour previous reply could not be used. Respond again with valid JSON "
    "only, exactly matching the requested structure, with no surrounding text."
)


@dataclass(frozen=True)
class GatewayResult:
    value: Any  # parsed JSON for structured templates, reply text otherwise
    raw_text: str
    calls: int  # provider calls spent on this completion


class Gateway:
    """Thread-safe front door to a provider."""

    def __init__(self, provider: Provider, *, max_calls: Optional[int] = None) -> None:
        self.provider = provider
        self.max_calls = max_calls
        self.calls_made = 0
        self._lock = threading.Lock()

    def render(self, template_id: str, bindings: Mapping[str, Any] | None = None) -> str:
        return render_prompt(template_id, bindings)

    def _spend(self) -> None:
        with self._lock:
            if self.max_calls is not None and self.calls_made >= self.max_calls:
                raise BudgetExceeded(f"provider call budget of {self.max_calls} exhausted")
            self.calls_made += 1

    def complete(
        self,
        template_id: str,
        bindings: Mapping[str, Any] | None = None,
        *,
        user_text: str = "",
        attachments: tuple[str, ...] = (),
        model_tier: str = "fast",
    ) -> GatewayResult:
        rendered = render_prompt(template_id, bindings)
        structured = template_id in JSON_TEMPLATES
        schema = REPLY_SCHEMAS[template_id]

        attempts = 1 + (MAX_REPAIR_RETRIES if structured else 0)
        last_error: Exception | None = None
        text = user_text
        for attempt in range(attempts):
            request = ProviderRequest(
                template_id=template_id,
                rendered_prompt=rendered,
                user_text=text,
                attachments=tuple(attachments),
                model_tier=model_tier,
            )
            self._spend()
            reply = self.provider.complete(request)
            if not structured:
                return GatewayResult(value=reply.text.strip(), raw_text=reply.text, calls=attempt + 1)
            try:
                value = parse_structured(reply.text, schema)
                check_reply(template_id, value)
                return GatewayResult(value=value, raw_text=reply.text, calls=attempt + 1)
            except (NoJsonFound, MultipleJsonValues, SchemaMismatch) as exc:
                last_error = exc
                log.warning(
                    "attempt %d/%d for %s rejected: %s", attempt + 1, attempts, template_id, exc
                )
                text = user_text + REPAIR_SUFFIX
        raise PersistentSchemaMismatch(last_error)  # type: ignore[arg-type]
