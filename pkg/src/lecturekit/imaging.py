"""Small image utilities: perceptual hashing, cropping, metadata access.

The 64-bit average hash is used both by the preprocessing pipeline (cheap
same-slide prefilter) and by the offline mock provider (deterministic
stand-in for vision-model judgments). PNG text metadata is preserved by
``crop_region`` because downstream consumers treat it as alt-text for the
cropped area.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image
from PIL.PngImagePlugin import PngInfo

from .errors import ImageUndecodable

HASH_BITS = 64


def load_image(ref: str | Path) -> Image.Image:
    try:
        img = Image.open(ref)
        img.load()
        return img
    except Exception:
        raise ImageUndecodable(str(ref)) from None


def average_hash(image: Image.Image, hash_size: int = 8) -> int:
    """64-bit average hash: downsample to 8x8 grayscale, threshold at the mean."""
    gray = image.convert("L").resize((hash_size, hash_size), Image.LANCZOS)
    pixels = np.asarray(gray, dtype=np.float64)
    bits = (pixels > pixels.mean()).flatten()
    value = 0
    for bit in bits:
        value = (value << 1) | int(bit)
    return value


def hash_file(ref: str | Path) -> int:
    return average_hash(load_image(ref))


def hamming(a: int, b: int) -> int:
    return bin(a ^ b).count("1")


def hash_hex(value: int) -> str:
    return f"{value:016x}"


def is_blank(image: Image.Image, tolerance: float = 1.0) -> bool:
    """True when the image is (nearly) a constant color."""
    pixels = np.asarray(image.convert("L"), dtype=np.float64)
    return float(pixels.std()) <= tolerance


def png_text(image: Image.Image) -> dict[str, str]:
    """PNG tEXt entries of ``image`` (empty for non-PNG sources)."""
    return dict(getattr(image, "text", {}) or {})


def crop_region(
    src: str | Path,
    rect: tuple[float, float, float, float],
    dst: str | Path,
) -> Path:
    """Crop a normalized [x0, y0, x1, y1] rectangle from ``src`` into ``dst``.

    Text metadata from the source PNG is carried over so the crop keeps any
    alt-text describing its content.
    """
    img = load_image(src)
    w, h = img.size
    x0, y0, x1, y1 = rect
    box = (
        max(0, min(w - 1, round(x0 * w))),
        max(0, min(h - 1, round(y0 * h))),
        max(1, min(w, round(x1 * w))),
        max(1, min(h, round(y1 * h))),
    )
    if box[2] <= box[0] or box[3] <= box[1]:
        box = (box[0], box[1], box[0] + 1, box[1] + 1)
    crop = img.crop(box)
    info = PngInfo()
    for key, value in png_text(img).items():
        info.add_text(key, value)
    dst = Path(dst)
    crop.save(dst, "PNG", pnginfo=info)
    return dst
