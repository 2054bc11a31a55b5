"""Image search: result shape, offline fixture provider, hosted adapter."""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from typing import Protocol
from urllib.parse import urlparse

import httpx

from ..errors import EmptyResults, SearchUnavailable


@dataclass(frozen=True)
class ImageResult:
    url: str
    title: str
    source_domain: str
    thumb_url: str

    def __post_init__(self) -> None:
        parsed = urlparse(self.url)
        if not (parsed.scheme in ("http", "https") and parsed.netloc):
            raise ValueError(f"image url is not well-formed: {self.url!r}")

    def to_json(self) -> dict:
        return {
            "url": self.url,
            "title": self.title,
            "sourceDomain": self.source_domain,
            "thumbUrl": self.thumb_url,
        }


class ImageSearchProvider(Protocol):
    def search(self, keywords: str, max_results: int) -> list[ImageResult]: ...


_FIXTURE_HOST = "img.fixtures.invalid"


def _fixture(slug: str, title: str) -> ImageResult:
    return ImageResult(
        url=f"https://{_FIXTURE_HOST}/{slug}.png",
        title=title,
        source_domain=_FIXTURE_HOST,
        thumb_url=f"https://{_FIXTURE_HOST}/{slug}-thumb.png",
    )


# Keyed by substring of the normalized keyword string.
FIXTURES: dict[str, list[ImageResult]] = {
    "quark": [
        _fixture("quarks/standard-model", "Quark composition diagram"),
        _fixture("quarks/baryons", "Baryons and mesons chart"),
    ],
    "atom": [
        _fixture("atom/bohr-model", "Bohr model of the atom"),
        _fixture("atom/orbitals", "Electron orbital shapes"),
    ],
    "force": [
        _fixture("forces/fundamental", "The four fundamental forces"),
    ],
}


class StubImageSearch:
    """Deterministic lookup: fixture table first, then synthesized entries."""

    def search(self, keywords: str, max_results: int) -> list[ImageResult]:
        normalized = keywords.strip().lower()
        if not normalized:
            return []
        for key, results in FIXTURES.items():
            if key in normalized:
                return results[:max_results]
        slug = re.sub(r"[^a-z0-9]+", "-", normalized).strip("-")[:48] or "query"
        return [
            _fixture(f"search/{slug}-{i + 1}", f"Illustration {i + 1} for {keywords.strip()}")
            for i in range(min(3, max_results))
        ]


class GoogleImageSearch:
    """Google Custom Search adapter (image mode)."""

    endpoint = "https://www.googleapis.com/customsearch/v1"

    def __init__(self, api_key: str | None = None, cx: str | None = None, *, endpoint: str | None = None) -> None:
        self.api_key = api_key or os.environ.get("IMAGE_SEARCH_KEY", "")
        self.cx = cx or os.environ.get("IMAGE_SEARCH_CX", "")
        if endpoint:
            self.endpoint = endpoint
        if not self.api_key or not self.cx:
            raise SearchUnavailable("image search credentials are not configured")

    def search(self, keywords: str, max_results: int) -> list[ImageResult]:
        params = {
            "key": self.api_key,
            "cx": self.cx,
            "q": keywords,
            "searchType": "image",
            "num": max(1, min(max_results, 10)),
        }
        try:
            response = httpx.get(self.endpoint, params=params, timeout=20.0)
            response.raise_for_status()
            items = response.json().get("items", [])
        except httpx.HTTPError as exc:
            raise SearchUnavailable(f"image search failed: {exc}") from None
        results = []
        for item in items[:max_results]:
            try:
                results.append(
                    ImageResult(
                        url=item["link"],
                        title=item.get("title", ""),
                        source_domain=item.get("displayLink", ""),
                        thumb_url=item.get("image", {}).get("thumbnailLink", item["link"]),
                    )
                )
            except (KeyError, ValueError):
                continue  # skip malformed entries, keep provider order
        return results


def image_provider_from_env() -> ImageSearchProvider:
    if os.environ.get("MEDIA_MOCK") == "1" or not os.environ.get("IMAGE_SEARCH_KEY"):
        return StubImageSearch()
    return GoogleImageSearch()


def search_images(provider: ImageSearchProvider, keywords: str, max_results: int = 6) -> list[ImageResult]:
    """Search with the module's error contract.

    Empty keywords and keyword sets with no hits both raise EmptyResults
    (the UI shows a no-visuals notice); ``max_results=0`` short-circuits to
    an empty list since nothing was asked for.
    """
    if max_results <= 0:
        return []
    if not keywords.strip():
        raise EmptyResults(keywords)
    results = provider.search(keywords, max_results)
    if not results:
        raise EmptyResults(keywords)
    return results[:max_results]
