"""Slide-aware overlay placement."""

from .boxes import detect_content_boxes
from .grid import DEFAULT_COLS, DEFAULT_ROWS, OccupancyGrid, rasterize
from .plan import (
    CHARS_PER_CELL,
    FONT_SCALES,
    OverlayPlan,
    capacity_chars,
    chars_per_cell,
    plan_from_grid,
    plan_overlay,
)
from .regions import FreeRegion, select_free_region

__all__ = [
    "CHARS_PER_CELL",
    "DEFAULT_COLS",
    "DEFAULT_ROWS",
    "FONT_SCALES",
    "FreeRegion",
    "OccupancyGrid",
    "OverlayPlan",
    "capacity_chars",
    "chars_per_cell",
    "detect_content_boxes",
    "plan_from_grid",
    "plan_overlay",
    "rasterize",
    "select_free_region",
]
