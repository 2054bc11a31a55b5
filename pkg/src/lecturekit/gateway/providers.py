"""Provider abstraction: the request/reply shapes and the HTTP backend.

A provider turns one fully rendered request into raw reply text. Retry,
parsing and schema enforcement live in the client, not here.
"""

from __future__ import annotations

import base64
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol, runtime_checkable

import httpx

from ..errors import AttachmentNotAllowed, ProviderUnavailable
from .templates import IMAGE_TEMPLATES, TEMPLATE_FILES

log = logging.getLogger(__name__)

MODEL_TIERS = ("fast", "reasoning")


@dataclass(frozen=True)
class ProviderRequest:
    template_id: str
    rendered_prompt: str
    user_text: str = ""
    attachments: tuple[str, ...] = ()
    model_tier: str = "fast"

    def __post_init__(self) -> None:
        if self.template_id not in TEMPLATE_FILES:
            raise KeyError(f"unknown template id {self.template_id!r}")
        if self.attachments and self.template_id not in IMAGE_TEMPLATES:
            raise AttachmentNotAllowed(self.template_id)
        if self.model_tier not in MODEL_TIERS:
            raise ValueError(f"model_tier must be one of {MODEL_TIERS}")


@dataclass(frozen=True)
class ProviderReply:
    text: str
    model: str = ""
    meta: dict = field(default_factory=dict)


@runtime_checkable
class Provider(Protocol):
    def complete(self, request: ProviderRequest) -> ProviderReply: ...


def _image_part(path: str) -> dict:
    data = Path(path).read_bytes()
    suffix = Path(path).suffix.lstrip(".").lower() or "png"
    encoded = base64.b64encode(data).decode("ascii")
    return {
        "type": "image_url",
        "image_url": {"url": f"data:image/{suffix};base64,{encoded}"},
    }


def provider_from_env() -> Provider:
    """Pick the provider from the environment.

    ``LLM_MOCK=1`` (or an unset ``LLM_API_URL``) selects the deterministic
    offline provider; otherwise requests go to the configured endpoint.
    """
    if os.environ.get("LLM_MOCK") == "1" or not os.environ.get("LLM_API_URL"):
        from .mock import MockProvider

        return MockProvider()
    return HttpProvider()


class HttpProvider:
    """Chat-completions style HTTP backend.

    Configured from ``LLM_API_URL`` / ``LLM_API_KEY`` unless given explicitly.
    The rendered template is sent as the system message; user text and image
    attachments form the user message.
    """

    def __init__(
        self,
        api_url: str | None = None,
        api_key: str | None = None,
        *,
        models: dict[str, str] | None = None,
        timeout: float = 60.0,
    ) -> None:
        self.api_url = api_url or os.environ.get("LLM_API_URL", "")
        self.api_key = api_key or os.environ.get("LLM_API_KEY", "")
        if not self.api_url:
            raise ProviderUnavailable("LLM_API_URL is not configured")
        self.models = models or {"fast": "gpt-4o-mini", "reasoning": "gpt-4o"}
        self.timeout = timeout

    def complete(self, request: ProviderRequest) -> ProviderReply:
        content: list[dict] = []
        if request.user_text:
            content.append({"type": "text", "text": request.user_text})
        for path in request.attachments:
            content.append(_image_part(path))
        messages = [{"role": "system", "content": request.rendered_prompt}]
        if content:
            messages.append({"role": "user", "content": content})
        payload = {"model": self.models[request.model_tier], "messages": messages}
        headers = {"Authorization": f"Bearer {self.api_key}"} if self.api_key else {}
        try:
            response = httpx.post(self.api_url, json=payload, headers=headers, timeout=self.timeout)
            response.raise_for_status()
            body = response.json()
            text = body["choices"][0]["message"]["content"]
        except httpx.HTTPError as exc:
            raise ProviderUnavailable(f"provider request failed: {exc}") from None
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise ProviderUnavailable(f"malformed provider response: {exc}") from None
        log.debug("provider reply for %s: %d chars", request.template_id, len(text))
        return ProviderReply(text=text, model=payload["model"], meta={"usage": body.get("usage", {})})
