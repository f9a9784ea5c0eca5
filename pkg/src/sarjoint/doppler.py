"""Doppler centroid estimation: azimuth-spectrum peak fit and ACCC phase method."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .focus import range_compress
from .radar_model import ComplexMatrix, RadarParams

MIN_AZIMUTH_LINES = 8
PEAK_CONTRAST = 1.1


@dataclass(frozen=True)
class DopplerEstimate:
    fdc_amplitude: float
    fdc_phase: float
    fdc_combined: float
    accc_angle: float
    squint_deg: float
    n_range_cells_used: int

    def as_lines(self) -> str:
        return "".join(f"{k}={getattr(self, k)!r}\n" for k in self.__dataclass_fields__)

    def __post_init__(self):
        for k in self.__dataclass_fields__:
            value = getattr(self, k)
            object.__setattr__(self, k, int(value) if k == "n_range_cells_used" else float(value))


def wrap_frequency(f, prf: float):
    """Map ``f`` into ``(-prf/2, prf/2]``."""
    return f + prf * np.floor((prf / 2.0 - f) / prf)


def spectrum_frequencies(n_az: int, prf: float) -> np.ndarray:
    return wrap_frequency(np.arange(n_az) * (prf / n_az), prf)


def _data(x) -> np.ndarray:
    return x.data if isinstance(x, ComplexMatrix) else np.asarray(x)


def azimuth_power_spectrum(data) -> np.ndarray:
    """Per-range-cell azimuth DFT power, averaged over range cells (DFT bin order)."""
    arr = _data(data)
    if arr.shape[0] < MIN_AZIMUTH_LINES:
        raise ValueError(f"need at least {MIN_AZIMUTH_LINES} azimuth lines, got {arr.shape[0]}")
    spec = np.fft.fft(arr, axis=0, norm="ortho")
    return np.mean(spec.real ** 2 + spec.imag ** 2, axis=1)


def _poly_argmax(coef: np.ndarray) -> float:
    """Abscissa of the largest value of ``polyval(coef, x)`` on [-1, 1]."""
    candidates = [-1.0, 1.0]
    for root in np.roots(np.polyder(coef)):
        if abs(root.imag) < 1e-9 and -1.0 <= root.real <= 1.0:
            candidates.append(float(root.real))
    values = np.polyval(coef, candidates)
    return candidates[int(np.argmax(values))]


def estimate_fdc_amplitude(
    spectrum, prf: float, fit_halfwidth_bins: int | None = None, poly_order: int = 4
) -> float:
    """Doppler centroid from the peak of a polynomial fitted to the power spectrum.

    The spectrum is smoothed with a circular 3-bin moving average, the
    fit spans ``fit_halfwidth_bins`` either side of its largest bin
    (default ``len // 8``) and the fitted maximum is returned in Hz.
    """
    power = np.asarray(spectrum, dtype=np.float64)
    n = power.size
    half = n // 8 if fit_halfwidth_bins is None else int(fit_halfwidth_bins)
    if poly_order not in (2, 4):
        raise ValueError("poly_order must be 2 or 4")
    if half < 1 or n < 2 * half + 1:
        raise ValueError(f"spectrum of {n} bins is too short for a +/-{half} bin fit")
    smooth = (np.roll(power, 1) + power + np.roll(power, -1)) / 3.0
    mean = smooth.mean()
    if not mean > 0 or smooth.max() / mean < PEAK_CONTRAST:
        raise NumericalError("no discernible Doppler peak")
    k0 = int(np.argmax(smooth))
    offsets = np.arange(-half, half + 1)
    coef = np.polyfit(offsets / half, smooth[(k0 + offsets) % n], poly_order)
    peak_bin = k0 + _poly_argmax(coef) * half
    return float(wrap_frequency(peak_bin * prf / n, prf))


def accc_angle(data) -> float:
    """Angle of the lag-one azimuth correlation, in ``(-pi, pi]``."""
    arr = _data(data)
    if arr.shape[0] < 2:
        raise ValueError("need at least 2 azimuth lines")
    corr = np.vdot(arr[:-1], arr[1:])
    if corr == 0:
        raise NumericalError("undefined correlation angle")
    angle = math.atan2(corr.imag, corr.real)
    return math.pi if angle == -math.pi else angle


def estimate_fdc_accc(range_compressed, prf: float) -> tuple[float, float]:
    """``(fdc, angle)`` with ``fdc = prf / (2 pi) * angle``."""
    angle = accc_angle(range_compressed)
    return prf / (2.0 * math.pi) * angle, angle


def combine_estimates(fa: float, fp: float) -> float:
    return (fa + fp) / 2.0


def squint_angle_deg(fdc: float, params: RadarParams) -> float:
    """Squint from ``sin(theta) = fdc * lambda / (2 v)``."""
    s = fdc * params.wavelength / (2.0 * params.v)
    if not -1.0 <= s <= 1.0:
        raise NumericalError(f"|fdc * lambda / 2v| = {abs(s):.3g} exceeds 1")
    return math.degrees(math.asin(s))


def estimate_doppler(
    raw: ComplexMatrix,
    params: RadarParams,
    fit_halfwidth_bins: int | None = None,
    poly_order: int = 4,
) -> tuple[DopplerEstimate, np.ndarray]:
    """Run both estimators on the range-compressed data.

    Returns the estimate and the averaged azimuth power spectrum.
    """
    rc = range_compress(raw, params) if raw.domain_tag == "signal" else raw
    spectrum = azimuth_power_spectrum(rc)
    fa = estimate_fdc_amplitude(spectrum, params.prf, fit_halfwidth_bins, poly_order)
    fp, angle = estimate_fdc_accc(rc, params.prf)
    fc = combine_estimates(fa, fp)
    est = DopplerEstimate(fa, fp, fc, angle, squint_angle_deg(fc, params), rc.n_rg)
    return est, spectrum
