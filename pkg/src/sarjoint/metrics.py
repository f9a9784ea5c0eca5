"""MSE / PSNR on 8-bit images and the median window-size sweep."""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .denoise import MedianConfig, median_filter
from .radar_model import as_pixels

PEAK = 255.0
PSNR_IDENTICAL = math.inf


class SweepRow(NamedTuple):
    p: int
    q: int
    psnr_db: float


def mse(a, b) -> float:
    pa, pb = as_pixels(a), as_pixels(b)
    if pa.shape != pb.shape:
        raise ValueError(f"image shapes differ: {pa.shape} vs {pb.shape}")
    diff = pa.astype(np.float64) - pb.astype(np.float64)
    return float(np.mean(diff * diff))


def psnr_from_mse(value: float) -> float:
    if value == 0.0:
        return PSNR_IDENTICAL
    return 10.0 * math.log10(PEAK * PEAK / value)


def psnr(a, b) -> float:
    """``10 log10(255^2 / MSE)`` in dB; identical images give ``inf``."""
    return psnr_from_mse(mse(a, b))


def psnr_sweep(noisy, sizes) -> list[SweepRow]:
    """Score ``median_filter(noisy, p, q)`` against ``noisy`` for each size.

    There is no clean reference: the filtered image is compared with the
    noisy input it came from, so the figure measures how much the filter
    changes the image rather than how close it gets to ground truth.
    """
    sizes = list(sizes)
    if not sizes:
        raise ValueError("sizes must not be empty")
    rows = []
    for p, q in sizes:
        filtered = median_filter(noisy, MedianConfig(int(p), int(q)))
        rows.append(SweepRow(int(p), int(q), psnr(noisy, filtered)))
    return rows
