"""Occupancy grid: slide content boxes rasterized at low resolution."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

DEFAULT_COLS = 24
DEFAULT_ROWS = 14

# Overlap areas at or below this count as zero-area contact, so a box ending
# exactly on a cell edge does not occupy the next cell.
GEOM_EPS = 1e-12

Rect = tuple[float, float, float, float]  # normalized [x0, y0, x1, y1]


@dataclass(frozen=True)
class OccupancyGrid:
    cols: int
    rows: int
    cells: np.ndarray = field(repr=False)  # bool, shape (rows, cols), True = occupied
    cell_size_px: Optional[tuple[float, float]] = None

    def __post_init__(self) -> None:
        if self.cols < 1 or self.rows < 1:
            raise ValueError("grid dimensions must be positive")
        if self.cols * self.rows > 4096:
            raise ValueError("grid larger than the low-resolution bound of 4096 cells")
        if self.cells.shape != (self.rows, self.cols):
            raise ValueError("cells shape does not match cols x rows")

    @property
    def free_count(self) -> int:
        return int((~self.cells).sum())

    def to_json(self) -> dict:
        return {
            "cols": self.cols,
            "rows": self.rows,
            "cells": [[bool(v) for v in row] for row in self.cells],
        }


def rasterize(
    boxes: Iterable[Rect],
    cols: int = DEFAULT_COLS,
    rows: int = DEFAULT_ROWS,
    *,
    image_size: Optional[tuple[int, int]] = None,
) -> OccupancyGrid:
    """Mark every cell that shares positive area with any box.

    A box touching a cell only along its border leaves the cell free, so a
    box covering exactly the left half of the slide occupies exactly the
    left half of the columns.
    """
    cells = np.zeros((rows, cols), dtype=bool)
    col_edges = np.arange(cols + 1) / cols
    row_edges = np.arange(rows + 1) / rows
    for box in boxes:
        x0, y0, x1, y1 = box
        x0, x1 = max(0.0, min(x0, x1)), min(1.0, max(x0, x1))
        y0, y1 = max(0.0, min(y0, y1)), min(1.0, max(y0, y1))
        if x1 <= x0 or y1 <= y0:
            continue
        col_overlap = np.minimum(col_edges[1:], x1) - np.maximum(col_edges[:-1], x0)
        row_overlap = np.minimum(row_edges[1:], y1) - np.maximum(row_edges[:-1], y0)
        cells |= np.outer(row_overlap > GEOM_EPS, col_overlap > GEOM_EPS)
    cell_px = None
    if image_size is not None:
        cell_px = (image_size[0] / cols, image_size[1] / rows)
    return OccupancyGrid(cols=cols, rows=rows, cells=cells, cell_size_px=cell_px)
