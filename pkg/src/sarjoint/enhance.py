"""Contrast enhancement: global HE, CLAHE and the fused median + CLAHE pass."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .denoise import MedianConfig, median_filter, pad_for_window
from .kernels import active as _k
from .kernels import new_counters
from .radar_model import GrayImage, as_pixels, round_half_up

BLEND_MODES = ("independent", "bilinear")


@dataclass(frozen=True)
class ClaheConfig:
    """Tile geometry and clip limit.

    ``clip_limit`` is a multiple of the uniform bin level (tile pixels / 256);
    ``math.inf`` disables clipping.
    """

    tile_w: int = 16
    tile_h: int = 16
    clip_limit: float = 4.0
    blend: str = "independent"

    def __post_init__(self):
        if self.tile_w < 2 or self.tile_h < 2:
            raise ValueError("tile dimensions must be >= 2")
        if not self.clip_limit >= 1.0:
            raise ValueError("clip_limit must be >= 1")
        if self.blend not in BLEND_MODES:
            raise ValueError(f"blend must be one of {BLEND_MODES}, got {self.blend!r}")


def equalize(img) -> GrayImage:
    """Global histogram equalization.

    ``T(v) = round(255 * (cdf(v) - cdf_min) / (N - cdf_min))`` with ``cdf_min``
    the first nonzero cumulative count. Single-valued images come back as is.
    """
    pixels = as_pixels(img)
    if pixels.size == 0:
        raise ValueError("cannot equalize an empty image")
    hist = np.bincount(pixels.ravel(), minlength=256).astype(np.int64)
    lut = _k.lut_from_hist(hist, math.inf)
    return GrayImage(lut[pixels].astype(np.uint8))


def _tile_centers(n: int, tile: int) -> np.ndarray:
    starts = np.arange(0, n, tile)
    stops = np.minimum(starts + tile, n)
    return (starts + stops - 1) / 2.0


def _blend_axis(n: int, tile: int):
    centers = _tile_centers(n, tile)
    pos = np.arange(n, dtype=np.float64)
    if centers.size == 1:
        zeros = np.zeros(n, np.int64)
        return zeros, zeros, np.zeros(n)
    lo = np.clip(np.searchsorted(centers, pos, side="right") - 1, 0, centers.size - 2)
    hi = lo + 1
    frac = np.clip((pos - centers[lo]) / (centers[hi] - centers[lo]), 0.0, 1.0)
    return lo, hi, frac


def _bilinear_remap(pixels: np.ndarray, luts: np.ndarray, cfg: ClaheConfig) -> np.ndarray:
    y0, y1, fy = _blend_axis(pixels.shape[0], cfg.tile_h)
    x0, x1, fx = _blend_axis(pixels.shape[1], cfg.tile_w)
    y0, y1, fy = y0[:, None], y1[:, None], fy[:, None]
    top = (1 - fx) * luts[y0, x0, pixels] + fx * luts[y0, x1, pixels]
    bottom = (1 - fx) * luts[y1, x0, pixels] + fx * luts[y1, x1, pixels]
    return round_half_up((1 - fy) * top + fy * bottom).astype(np.uint8)


def clahe(img, cfg: ClaheConfig = ClaheConfig(), counters=None) -> GrayImage:
    """Contrast-limited equalization over ``tile_w`` x ``tile_h`` blocks.

    Edge tiles may be smaller; their uniform level uses their own pixel
    count. ``independent`` maps each tile with its own table, ``bilinear``
    interpolates between the four nearest tile-centre tables.
    """
    pixels = as_pixels(img)
    if pixels.size == 0:
        raise ValueError("cannot equalize an empty image")
    if counters is None:
        counters = new_counters()
    hists = _k.tile_histograms(pixels, cfg.tile_w, cfg.tile_h, counters)
    luts = _k.tile_luts(hists, float(cfg.clip_limit))
    if cfg.blend == "independent":
        return GrayImage(_k.apply_tile_luts(pixels, luts, cfg.tile_w, cfg.tile_h))
    return GrayImage(_bilinear_remap(pixels, luts, cfg))


def joint_denoise_enhance(
    img,
    mcfg: MedianConfig = MedianConfig(),
    ccfg: ClaheConfig = ClaheConfig(),
    counters=None,
) -> GrayImage:
    """Median-filter and CLAHE-enhance in one sweep over the image.

    Tiles see the true neighbouring pixels as their apron (replicated only at
    the image border), so the result is identical to
    ``clahe(median_filter(img, mcfg), ccfg)``. The independent-tile case runs
    fused; bilinear blending needs every tile table before remapping and is
    done as the two-stage composition.
    """
    pixels = as_pixels(img)
    if pixels.size == 0:
        raise ValueError("cannot process an empty image")
    if counters is None:
        counters = new_counters()
    if ccfg.blend == "bilinear":
        return clahe(median_filter(pixels, mcfg, counters), ccfg, counters)
    padded = np.ascontiguousarray(pad_for_window(pixels, mcfg.p, mcfg.q))
    out = _k.joint_median_clahe(
        padded, int(mcfg.p), int(mcfg.q), ccfg.tile_w, ccfg.tile_h, float(ccfg.clip_limit), counters
    )
    return GrayImage(out)


def histogram(img) -> np.ndarray:
    """256-bin occurrence counts."""
    return np.bincount(as_pixels(img).ravel(), minlength=256)
