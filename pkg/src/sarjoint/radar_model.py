"""Radar parameters, scene targets and the complex / gray raster types."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .errors import DataFormatError

SPEED_OF_LIGHT = 299_792_458.0

# Pipeline order of ComplexMatrix.domain_tag values.
DOMAIN_ORDER = ("signal", "range_dechirped", "freq2d", "stolt_mapped")


@dataclass(frozen=True)
class RadarParams:
    """Platform and sensor constants, all SI units (Hz, s, m, m/s)."""

    fc: float
    fr: float
    prf: float
    beta: float
    t_chirp: float
    v: float
    bandwidth: float
    r0_first: float
    c: float = SPEED_OF_LIGHT

    def __post_init__(self):
        for name in ("fc", "fr", "prf", "beta", "t_chirp", "v", "bandwidth", "r0_first", "c"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and > 0, got {value!r}")
        if self.fr < self.bandwidth:
            raise ValueError(
                f"range sampling rate {self.fr} Hz is below the chirp bandwidth {self.bandwidth} Hz"
            )
        mismatch = abs(self.beta * self.t_chirp - self.bandwidth) / self.bandwidth
        if mismatch > 0.01:
            warnings.warn(
                f"beta*T = {self.beta * self.t_chirp:.6g} Hz differs from bandwidth "
                f"{self.bandwidth:.6g} Hz by {100 * mismatch:.1f} %",
                stacklevel=2,
            )

    @property
    def wavelength(self) -> float:
        return self.c / self.fc

    @property
    def range_bin_m(self) -> float:
        """Slant-range spacing of one fast-time sample."""
        return self.c / (2.0 * self.fr)

    @property
    def t0(self) -> float:
        """Fast time of the first range sample."""
        return 2.0 * self.r0_first / self.c

    def scene_center_range(self, n_rg: int) -> float:
        return self.r0_first + n_rg * self.range_bin_m / 2.0


def ers2() -> RadarParams:
    """ERS-2 strip-map parameters (bundled ``presets/ers2.par``)."""
    from .io import parse_sidecar

    text = resources.files("sarjoint").joinpath("presets/ers2.par").read_text()
    return parse_sidecar(text).params


@dataclass(frozen=True)
class PointTarget:
    sigma: complex
    r0: float
    eta_c: float
    aperture_time: float

    def __post_init__(self):
        if not self.r0 > 0:
            raise ValueError("r0 must be > 0")
        if not self.aperture_time > 0:
            raise ValueError("aperture_time must be > 0")


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    if arr.flags.writeable:
        arr = arr.copy()
        arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class ComplexMatrix:
    """Azimuth-major complex grid: ``data[i_az, i_rg]``.

    ``t0`` and ``eta0`` are the fast and slow times of sample ``[0, 0]``.
    The array is stored read-only; stages always return new matrices.
    """

    data: np.ndarray
    domain_tag: str = "signal"
    t0: float = 0.0
    eta0: float = 0.0

    def __post_init__(self):
        if self.domain_tag not in DOMAIN_ORDER:
            raise ValueError(f"unknown domain tag {self.domain_tag!r}")
        arr = np.asarray(self.data)
        if arr.ndim != 2:
            raise ValueError(f"complex matrix must be 2-D, got shape {arr.shape}")
        if not np.iscomplexobj(arr):
            arr = arr.astype(np.complex128)
        object.__setattr__(self, "data", _frozen(arr))

    @property
    def n_az(self) -> int:
        return self.data.shape[0]

    @property
    def n_rg(self) -> int:
        return self.data.shape[1]

    def replace(self, data: np.ndarray, domain_tag: str | None = None) -> "ComplexMatrix":
        tag = self.domain_tag if domain_tag is None else domain_tag
        return ComplexMatrix(data, tag, self.t0, self.eta0)


@dataclass(frozen=True)
class GrayImage:
    """8-bit intensity raster, ``pixels[row, col]``."""

    pixels: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.pixels)
        if arr.ndim != 2:
            raise ValueError(f"gray image must be 2-D, got shape {arr.shape}")
        if arr.dtype != np.uint8:
            if arr.size and (arr.min() < 0 or arr.max() > 255):
                raise ValueError("pixel values must lie in [0, 255]")
            arr = arr.astype(np.uint8)
        object.__setattr__(self, "pixels", _frozen(arr))

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.pixels.shape

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.pixels, other.pixels))

    __hash__ = None


def as_pixels(img) -> np.ndarray:
    """Return the uint8 pixel array of a GrayImage or array-like."""
    if isinstance(img, GrayImage):
        return img.pixels
    return GrayImage(np.asarray(img)).pixels


def round_half_up(x):
    return np.floor(np.asarray(x, dtype=np.float64) + 0.5)


def magnitude_to_gray(img: ComplexMatrix, scaling: str | float = 99.9) -> GrayImage:
    """Quantize ``|img|`` to 8 bits.

    ``scaling`` is ``"linear_max"`` or a percentile in (0, 100]; the chosen
    reference magnitude maps to 255 and everything above it saturates.
    """
    data = img.data if isinstance(img, ComplexMatrix) else np.asarray(img)
    if data.size == 0:
        raise DataFormatError("cannot quantize an empty matrix")
    mag = np.abs(data)
    peak = float(mag.max())
    if scaling == "linear_max":
        ref = peak
    else:
        pct = float(scaling)
        if not 0 < pct <= 100:
            raise ValueError(f"percentile must be in (0, 100], got {pct}")
        ref = float(np.percentile(mag, pct))
        if ref == 0.0:
            # sparse scene: fall back to the peak so bright pixels survive
            ref = peak
    if ref == 0.0:
        ref = 1.0
    pixels = round_half_up(255.0 * np.clip(mag / ref, 0.0, 1.0))
    return GrayImage(pixels.astype(np.uint8))
