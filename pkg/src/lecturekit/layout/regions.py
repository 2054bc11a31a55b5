"""Free-region selection over an occupancy grid.

The winner is the all-free axis-aligned rectangle with at least ``min_cells``
cells that is best under the total order: most cells, then closest center to
the anchor, then smallest top row, left column, height, width. The order is
total, so identical inputs always yield the same region.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import NoFreeRegion
from .grid import OccupancyGrid, Rect

Point = tuple[float, float]


@dataclass(frozen=True)
class FreeRegion:
    rect: Rect  # normalized slide coordinates
    cell_count: int
    distance_to_anchor: float
    grid_rect: tuple[int, int, int, int]  # (top, left, height, width) in cells

    def to_json(self) -> dict:
        return {
            "rect": list(self.rect),
            "cellCount": self.cell_count,
            "distanceToAnchor": self.distance_to_anchor,
            "gridRect": list(self.grid_rect),
        }


def _clamp01(v: float) -> float:
    return 0.0 if v < 0.0 else 1.0 if v > 1.0 else v


def _distance(top: int, left: int, height: int, width: int, anchor: Point, cols: int, rows: int) -> float:
    cx = (left + width / 2) / cols
    cy = (top + height / 2) / rows
    return math.hypot(cx - anchor[0], cy - anchor[1])


def _order_key(candidate, anchor: Point, cols: int, rows: int):
    top, left, height, width = candidate
    return (
        -(height * width),
        _distance(top, left, height, width, anchor, cols, rows),
        top,
        left,
        height,
        width,
    )


def _candidates(cells: np.ndarray):
    """Rectangles that cannot be widened: for every row window, the maximal
    horizontal runs of columns free across the whole window. This is a
    superset of the inclusion-maximal rectangles, which is sufficient: any
    non-maximal candidate is strictly smaller than its container and can
    never win the size-first order."""
    rows, cols = cells.shape
    free = ~cells
    for top in range(rows):
        window = np.ones(cols, dtype=bool)
        for bottom in range(top, rows):
            window &= free[bottom]
            if not window.any():
                break
            height = bottom - top + 1
            # maximal runs of True in `window`
            padded = np.concatenate(([False], window, [False]))
            edges = np.flatnonzero(padded[1:] != padded[:-1])
            for start, stop in zip(edges[::2], edges[1::2]):
                yield (top, int(start), height, int(stop - start))


def select_free_region(
    grid: OccupancyGrid, anchor: Point, min_cells: int = 1
) -> FreeRegion:
    """Best qualifying free rectangle; raises NoFreeRegion if none reaches
    ``min_cells``."""
    anchor = (_clamp01(anchor[0]), _clamp01(anchor[1]))
    best = None
    best_key = None
    for candidate in _candidates(grid.cells):
        if candidate[2] * candidate[3] < min_cells:
            continue
        key = _order_key(candidate, anchor, grid.cols, grid.rows)
        if best_key is None or key < best_key:
            best, best_key = candidate, key
    if best is None:
        raise NoFreeRegion(min_cells)
    top, left, height, width = best
    return FreeRegion(
        rect=(
            left / grid.cols,
            top / grid.rows,
            (left + width) / grid.cols,
            (top + height) / grid.rows,
        ),
        cell_count=height * width,
        distance_to_anchor=best_key[1],
        grid_rect=best,
    )
