"""Content-box detection on slide images.

Grayscale, adaptive binarization, connected components, then a merge pass
that unions boxes separated by less than 1% of the image width. Output boxes
are normalized to [0,1] and sorted by area, largest first.
"""

from __future__ import annotations

from pathlib import Path
from typing import Union

import cv2
import numpy as np

from ..errors import ImageUndecodable
from .grid import Rect

ADAPTIVE_BLOCK_SIZE = 25
ADAPTIVE_C = 15
MIN_COMPONENT_AREA_PX = 4
MERGE_GAP_FRACTION = 0.01

ImageLike = Union[str, Path, np.ndarray]


def _load_bgr(image: ImageLike) -> np.ndarray:
    if isinstance(image, np.ndarray):
        if image.ndim not in (2, 3) or image.size == 0:
            raise ImageUndecodable("array with unsupported shape")
        return image
    data = cv2.imread(str(image), cv2.IMREAD_COLOR)
    if data is None:
        raise ImageUndecodable(str(image))
    return data


def _gap(a: tuple[int, int, int, int], b: tuple[int, int, int, int]) -> float:
    ax0, ay0, ax1, ay1 = a
    bx0, by0, bx1, by1 = b
    dx = max(bx0 - ax1, ax0 - bx1, 0)
    dy = max(by0 - ay1, ay0 - by1, 0)
    return max(dx, dy)


def _merge_pass(boxes: list, threshold: float) -> tuple[list, bool]:
    merged = []
    used = [False] * len(boxes)
    changed = False
    for i, box in enumerate(boxes):
        if used[i]:
            continue
        cur = list(box)
        for j in range(i + 1, len(boxes)):
            if used[j]:
                continue
            if _gap(tuple(cur), boxes[j]) < threshold:
                other = boxes[j]
                cur = [
                    min(cur[0], other[0]),
                    min(cur[1], other[1]),
                    max(cur[2], other[2]),
                    max(cur[3], other[3]),
                ]
                used[j] = True
                changed = True
        merged.append(tuple(cur))
    return merged, changed


def detect_content_boxes(image: ImageLike) -> list[Rect]:
    """Normalized bounding boxes of visible slide content, area-descending."""
    bgr = _load_bgr(image)
    gray = cv2.cvtColor(bgr, cv2.COLOR_BGR2GRAY) if bgr.ndim == 3 else bgr
    height, width = gray.shape[:2]
    binary = cv2.adaptiveThreshold(
        gray,
        255,
        cv2.ADAPTIVE_THRESH_MEAN_C,
        cv2.THRESH_BINARY_INV,
        ADAPTIVE_BLOCK_SIZE,
        ADAPTIVE_C,
    )
    count, _, stats, _ = cv2.connectedComponentsWithStats(binary)
    boxes = []
    for label in range(1, count):  # label 0 is the background
        x, y, w, h, area = stats[label]
        if area < MIN_COMPONENT_AREA_PX:
            continue
        boxes.append((int(x), int(y), int(x + w), int(y + h)))

    threshold = MERGE_GAP_FRACTION * width
    changed = True
    while changed and len(boxes) > 1:
        boxes, changed = _merge_pass(boxes, threshold)

    normalized = [
        (x0 / width, y0 / height, x1 / width, y1 / height) for x0, y0, x1, y1 in boxes
    ]
    normalized.sort(key=lambda b: ((b[2] - b[0]) * (b[3] - b[1]), b), reverse=True)
    return normalized
