"""Overlay planning: where generated text lands on a slide and how it fits.

Placement tries a comfortable font first, then a reduced one, then falls
back to the largest available region with scrolling, and finally to a
full-slide modal when the grid is completely occupied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from ..errors import NoFreeRegion
from .boxes import ImageLike, detect_content_boxes
from .grid import DEFAULT_COLS, DEFAULT_ROWS, OccupancyGrid, Rect, rasterize
from .regions import FreeRegion, Point, select_free_region

# Characters a single grid cell fits at fontScale 1.0. Smaller glyphs pack
# quadratically more text into the same cell.
CHARS_PER_CELL = 6.0
FONT_SCALES = (1.0, 0.75)
MIN_FONT_SCALE = 0.75


def chars_per_cell(font_scale: float) -> float:
    return CHARS_PER_CELL / (font_scale * font_scale)


def capacity_chars(cell_count: int, font_scale: float) -> int:
    return int(cell_count * chars_per_cell(font_scale))


@dataclass(frozen=True)
class OverlayPlan:
    region: FreeRegion
    estimated_capacity_chars: int
    scrollable: bool
    font_scale: float
    modal: bool = False  # grid fully occupied; cover the slide instead

    def to_json(self) -> dict:
        return {
            "region": self.region.to_json(),
            "estimatedCapacityChars": self.estimated_capacity_chars,
            "scrollable": self.scrollable,
            "fontScale": self.font_scale,
            "modal": self.modal,
        }


def plan_from_grid(grid: OccupancyGrid, anchor: Point, response_text: str) -> OverlayPlan:
    length = len(response_text)
    for scale in FONT_SCALES:
        needed = max(1, math.ceil(length / chars_per_cell(scale)))
        try:
            region = select_free_region(grid, anchor, needed)
        except NoFreeRegion:
            continue
        capacity = capacity_chars(region.cell_count, scale)
        return OverlayPlan(
            region=region,
            estimated_capacity_chars=capacity,
            scrollable=length > capacity,
            font_scale=scale,
        )
    try:
        region = select_free_region(grid, anchor, 1)
    except NoFreeRegion:
        # nothing free at all: modal covering the whole slide
        full = FreeRegion(
            rect=(0.0, 0.0, 1.0, 1.0),
            cell_count=grid.cols * grid.rows,
            distance_to_anchor=0.0,
            grid_rect=(0, 0, grid.rows, grid.cols),
        )
        capacity = capacity_chars(full.cell_count, MIN_FONT_SCALE)
        return OverlayPlan(
            region=full,
            estimated_capacity_chars=capacity,
            scrollable=length > capacity,
            font_scale=MIN_FONT_SCALE,
            modal=True,
        )
    capacity = capacity_chars(region.cell_count, MIN_FONT_SCALE)
    return OverlayPlan(
        region=region,
        estimated_capacity_chars=capacity,
        scrollable=length > capacity,
        font_scale=MIN_FONT_SCALE,
    )


def plan_overlay(
    slide_image: ImageLike,
    anchor: Point,
    response_text: str,
    *,
    cols: int = DEFAULT_COLS,
    rows: int = DEFAULT_ROWS,
    extra_boxes: Sequence[Rect] = (),
) -> OverlayPlan:
    """Detect content, rasterize, and place ``response_text`` near ``anchor``.

    ``extra_boxes`` marks regions that must stay clear regardless of slide
    content (the avatar viewport, persistent UI chrome).
    """
    boxes: Iterable[Rect] = list(detect_content_boxes(slide_image)) + list(extra_boxes)
    grid = rasterize(boxes, cols, rows)
    return plan_from_grid(grid, anchor, response_text)
