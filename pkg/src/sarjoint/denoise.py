"""Speckle suppression with a sliding-histogram median filter."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernels import active as _k
from .kernels import new_counters
from .radar_model import GrayImage, as_pixels


@dataclass(frozen=True)
class MedianConfig:
    """``p`` x ``q`` window (width x height); border pixels are replicated."""

    p: int = 16
    q: int = 16
    border: str = "replicate"

    def __post_init__(self):
        if int(self.p) < 1 or int(self.q) < 1:
            raise ValueError(f"window dimensions must be >= 1, got p={self.p}, q={self.q}")
        if self.border != "replicate":
            raise ValueError(f"unsupported border policy {self.border!r}")


def window_offsets(p: int, q: int) -> tuple[int, int]:
    """(left, top) extent of the window before the anchor pixel."""
    return (p - 1) // 2, (q - 1) // 2


def pad_for_window(pixels: np.ndarray, p: int, q: int) -> np.ndarray:
    left, top = window_offsets(p, q)
    return np.pad(pixels, ((top, q - 1 - top), (left, p - 1 - left)), mode="edge")


def median_filter(img, cfg: MedianConfig = MedianConfig(), counters=None) -> GrayImage:
    """Median of the ``p`` x ``q`` window around every pixel.

    Windows with even dimensions are anchored ``(p-1)//2`` columns left and
    ``(q-1)//2`` rows above the output pixel; even-sized windows return the
    lower median. Pass a ``counters`` array from :func:`new_counters` to
    collect histogram work statistics.
    """
    pixels = as_pixels(img)
    if pixels.size == 0:
        raise ValueError("cannot filter an empty image")
    if counters is None:
        counters = new_counters()
    padded = np.ascontiguousarray(pad_for_window(pixels, cfg.p, cfg.q))
    return GrayImage(_k.median_filter_padded(padded, int(cfg.p), int(cfg.q), counters))
