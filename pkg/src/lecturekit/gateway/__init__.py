"""LLM gateway: prompt templates, providers, parsing and the retrying client."""

from .client import Gateway, GatewayResult, MAX_REPAIR_RETRIES, REPAIR_SUFFIX
from .mock import MockProvider
from .parsing import parse_structured, strip_fences
from .providers import (
    HttpProvider,
    Provider,
    ProviderReply,
    ProviderRequest,
    provider_from_env,
)
from .schemas import REPLY_SCHEMAS, check_reply
from .templates import (
    IMAGE_TEMPLATES,
    JSON_TEMPLATES,
    TEMPLATE_IDS,
    load_template,
    render_prompt,
    required_bindings,
    scan_placeholders,
)

__all__ = [
    "Gateway",
    "GatewayResult",
    "HttpProvider",
    "IMAGE_TEMPLATES",
    "JSON_TEMPLATES",
    "MAX_REPAIR_RETRIES",
    "MockProvider",
    "Provider",
    "ProviderReply",
    "ProviderRequest",
    "REPAIR_SUFFIX",
    "REPLY_SCHEMAS",
    "TEMPLATE_IDS",
    "check_reply",
    "load_template",
    "parse_structured",
    "provider_from_env",
    "render_prompt",
    "required_bindings",
    "scan_placeholders",
    "strip_fences",
]
