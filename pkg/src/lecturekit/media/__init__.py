"""Speech and image-search providers with deterministic offline stubs."""

from .clock import Clock, ManualClock, ScaledClock, TimerHandle
from .images import (
    GoogleImageSearch,
    ImageResult,
    ImageSearchProvider,
    StubImageSearch,
    image_provider_from_env,
    search_images,
)
from .speech import (
    DONE,
    FAILED,
    QUEUED,
    SPEAKING,
    SpeechChannel,
    SpeechJob,
    SpeechProvider,
    StubSpeechProvider,
    WORDS_PER_MINUTE,
    estimate_duration_sec,
    speech_provider_from_env,
)

__all__ = [
    "Clock",
    "DONE",
    "FAILED",
    "GoogleImageSearch",
    "ImageResult",
    "ImageSearchProvider",
    "ManualClock",
    "QUEUED",
    "SPEAKING",
    "ScaledClock",
    "SpeechChannel",
    "SpeechJob",
    "SpeechProvider",
    "StubImageSearch",
    "StubSpeechProvider",
    "TimerHandle",
    "WORDS_PER_MINUTE",
    "estimate_duration_sec",
    "image_provider_from_env",
    "search_images",
    "speech_provider_from_env",
]
