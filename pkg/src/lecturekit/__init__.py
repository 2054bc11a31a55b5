"""Toolkit for turning recorded lectures into interactive, self-hosted lessons.

Subpackages:

- ``bundle``: the preprocessed lecture data model and its on-disk format
- ``gateway``: prompt templates, structured-reply parsing and LLM providers
- ``pipeline``: offline video/transcript preprocessing into bundles
- ``layout``: slide-aware overlay placement
- ``media``: speech playback and image search providers
- ``session``: the live lesson state machine
- ``summary``: end-of-lesson summary assembly
- ``service``: HTTP API and command line entry points
"""

__version__ = "0.1.0"
