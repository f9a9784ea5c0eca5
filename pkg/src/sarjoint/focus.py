"""Omega-k image formation.

Chain: :func:`fft2` -> :func:`range_dechirp` -> :func:`reference_multiply`
-> :func:`stolt_interpolate` -> :func:`finalize_image`.

Transforms are unitary (``norm="ortho"``). :func:`fft2` also removes the
fast-time origin ``t0`` of the grid, so the 2-D spectrum refers to absolute
fast time and the reference/Stolt phases apply unchanged;
:func:`finalize_image` puts ``t0`` back before the inverse transform.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .kernels import active as _k
from .radar_model import ComplexMatrix, RadarParams

EVANESCENT_LIMIT = 0.10


@dataclass(frozen=True)
class FocusConfig:
    r_ref: float
    fdc: float = 0.0
    stolt_taps: int = 8
    kaiser_beta: float = 5.0
    stolt_method: str = "sinc"

    def __post_init__(self):
        if not self.r_ref >= 0:
            raise ValueError("r_ref must be >= 0")
        if self.stolt_taps < 4 or self.stolt_taps % 2:
            raise ValueError("stolt_taps must be even and >= 4")
        if self.stolt_method not in ("sinc", "linear"):
            raise ValueError(f"unknown stolt_method {self.stolt_method!r}")


def default_config(params: RadarParams, n_rg: int, fdc: float = 0.0, **kwargs) -> FocusConfig:
    """Config referenced to the scene-centre slant range."""
    return FocusConfig(r_ref=params.scene_center_range(n_rg), fdc=fdc, **kwargs)


def range_frequencies(n_rg: int, fr: float) -> np.ndarray:
    """Fast-time frequency of each DFT bin, in ``(-fr/2, fr/2]``."""
    k = np.arange(n_rg)
    k[k > n_rg // 2] -= n_rg
    return k * (fr / n_rg)


def azimuth_frequencies(n_az: int, prf: float, fdc: float = 0.0) -> np.ndarray:
    """Slow-time frequency of each DFT bin, unwrapped into ``[fdc - prf/2, fdc + prf/2)``."""
    f = np.arange(n_az) * (prf / n_az)
    lo = fdc - prf / 2.0
    return lo + np.mod(f - lo, prf)


def _expect(data: ComplexMatrix, tag: str) -> None:
    if data.domain_tag != tag:
        raise ValueError(f"expected domain {tag!r}, got {data.domain_tag!r}")


def _phasor(cycles: np.ndarray) -> np.ndarray:
    """``exp(j 2 pi cycles)`` with whole cycles removed first."""
    frac = cycles - np.floor(cycles)
    return np.exp(2j * np.pi * frac)


def fft2(data: ComplexMatrix, params: RadarParams, fdc: float = 0.0) -> ComplexMatrix:
    """Unitary 2-D DFT (fast time, then slow time), referenced to absolute fast time.

    ``fdc`` only fixes how azimuth bins are labelled downstream (see
    :func:`azimuth_frequencies`); it does not change the samples.
    """
    _expect(data, "signal")
    spec = np.fft.fft(data.data, axis=1, norm="ortho")
    ft = range_frequencies(data.n_rg, params.fr)
    spec *= _phasor(-ft * data.t0)[None, :]
    spec = np.fft.fft(spec, axis=0, norm="ortho")
    return data.replace(spec, "freq2d")


def range_dechirp(spec: ComplexMatrix, params: RadarParams) -> ComplexMatrix:
    """Multiply by ``exp(+j pi f_t^2 / beta)``, cancelling the range chirp."""
    _expect(spec, "freq2d")
    ft = range_frequencies(spec.n_rg, params.fr)
    return spec.replace(spec.data * np.exp(1j * np.pi * ft * ft / params.beta)[None, :])


def _radicand(n_az: int, n_rg: int, fdc: float, params: RadarParams) -> np.ndarray:
    ft = range_frequencies(n_rg, params.fr)
    feta = azimuth_frequencies(n_az, params.prf, fdc)
    kaz = (params.c * feta / (2.0 * params.v)) ** 2
    return (params.fc + ft)[None, :] ** 2 - kaz[:, None]


def reference_multiply(spec: ComplexMatrix, cfg: FocusConfig, params: RadarParams) -> ComplexMatrix:
    """Multiply by ``exp(+j 4 pi R_ref/c sqrt((fc+f_t)^2 - c^2 f_eta^2 / 4v^2))``.

    Evanescent bins (negative radicand) are zeroed; more than 10 % of the
    occupied bins being evanescent is an error.
    """
    _expect(spec, "freq2d")
    rad = _radicand(spec.n_az, spec.n_rg, cfg.fdc, params)
    evanescent = rad < 0
    root = np.sqrt(np.where(evanescent, 0.0, rad))
    out = spec.data * _phasor(2.0 * cfg.r_ref / params.c * root)
    if evanescent.any():
        occupied = spec.data != 0
        n_bad = int(np.count_nonzero(evanescent & occupied))
        n_occ = max(1, int(np.count_nonzero(occupied)))
        if n_bad > EVANESCENT_LIMIT * n_occ:
            raise NumericalError(f"{n_bad} of {n_occ} occupied bins are evanescent")
        if n_bad:
            warnings.warn(f"zeroed {n_bad} evanescent bins", stacklevel=2)
        out = np.where(evanescent, 0, out)
    return spec.replace(out)


def stolt_source_index(n_az: int, n_rg: int, fdc: float, params: RadarParams):
    """Fractional source positions for the Stolt resampling.

    Returns ``(order, src)``: ``order`` sorts the range bins by frequency and
    ``src[i, k]`` is where output bin ``order[k]`` reads from in that sorted
    row, i.e. the index of ``f_t = sqrt((fc + f')^2 + c^2 f_eta^2/4v^2) - fc``.
    """
    ft = range_frequencies(n_rg, params.fr)
    order = np.argsort(ft, kind="stable")
    fsorted = ft[order]
    df = params.fr / n_rg
    feta = azimuth_frequencies(n_az, params.prf, fdc)
    kaz = ((params.c * feta / (2.0 * params.v)) ** 2)[:, None]
    carrier = params.fc + fsorted[None, :]
    # sqrt(carrier^2 + kaz) - carrier, written to avoid cancellation
    shift = kaz / (np.sqrt(carrier * carrier + kaz) + carrier)
    src = np.arange(n_rg)[None, :] + shift / df
    return order, src


def stolt_interpolate(spec: ComplexMatrix, cfg: FocusConfig, params: RadarParams) -> ComplexMatrix:
    """Resample each azimuth-frequency row onto the linearized ``f'_t`` grid."""
    _expect(spec, "freq2d")
    if cfg.stolt_taps > spec.n_rg:
        raise ValueError(f"{cfg.stolt_taps}-tap kernel is longer than a {spec.n_rg}-bin row")
    order, src = stolt_source_index(spec.n_az, spec.n_rg, cfg.fdc, params)
    rows = np.ascontiguousarray(spec.data[:, order], dtype=np.complex128)
    if cfg.stolt_method == "sinc":
        mapped = _k.stolt_sinc(rows, src, cfg.stolt_taps, float(cfg.kaiser_beta))
    else:
        mapped = _k.stolt_linear(rows, src)
    out = np.empty_like(mapped)
    out[:, order] = mapped
    return spec.replace(out, "stolt_mapped")


def finalize_image(spec: ComplexMatrix, cfg: FocusConfig, params: RadarParams) -> ComplexMatrix:
    """Restore absolute range with ``exp(-j 4 pi R_ref f'_t / c)`` and invert the 2-D DFT."""
    _expect(spec, "stolt_mapped")
    ft = range_frequencies(spec.n_rg, params.fr)
    # the t0 term undoes the fast-time referencing applied in fft2
    shift = _phasor(ft * (spec.t0 - 2.0 * cfg.r_ref / params.c))
    img = np.fft.ifft2(spec.data * shift[None, :], norm="ortho")
    return spec.replace(img, "signal")


def focus(raw: ComplexMatrix, cfg: FocusConfig, params: RadarParams) -> ComplexMatrix:
    spec = fft2(raw, params, cfg.fdc)
    spec = range_dechirp(spec, params)
    spec = reference_multiply(spec, cfg, params)
    spec = stolt_interpolate(spec, cfg, params)
    return finalize_image(spec, cfg, params)


def range_compress(raw: ComplexMatrix, params: RadarParams) -> ComplexMatrix:
    """Matched-filter every azimuth line in range (de-chirp in the range-frequency domain)."""
    _expect(raw, "signal")
    ft = range_frequencies(raw.n_rg, params.fr)
    spec = np.fft.fft(raw.data, axis=1, norm="ortho")
    spec *= np.exp(1j * np.pi * ft * ft / params.beta)[None, :]
    return raw.replace(np.fft.ifft(spec, axis=1, norm="ortho"), "range_dechirped")
