"""Raw strip-map echo synthesis from point targets.

Samples are stored at baseband: the ``exp(j 2 pi fc t)`` carrier is removed
and only the range-dependent carrier phase ``exp(-j 4 pi fc R(eta) / c)``
survives. Range and azimuth envelopes are rectangles evaluated on the
half-open support ``[-W/2, W/2)``.
"""
from __future__ import annotations

import math

import numpy as np

from .kernels import active as _k
from .radar_model import ComplexMatrix, PointTarget, RadarParams


def instantaneous_range(target: PointTarget, eta: float, v: float):
    """Slant range ``sqrt(R0^2 + v^2 (eta - eta_c)^2)``; ``eta`` may be an array."""
    d = np.asarray(eta, dtype=np.float64) - target.eta_c
    r = np.sqrt(target.r0 ** 2 + (v * d) ** 2)
    return float(r) if r.ndim == 0 else r


def _target_table(targets) -> np.ndarray:
    table = np.empty((len(targets), 5), np.float64)
    for i, t in enumerate(targets):
        sigma = complex(t.sigma)
        table[i] = (sigma.real, sigma.imag, t.r0, t.eta_c, t.aperture_time)
    return table


def simulate_raw(
    targets,
    params: RadarParams,
    n_az: int,
    n_rg: int,
    t0: float | None = None,
    eta0: float = 0.0,
    fdc_inject: float = 0.0,
) -> ComplexMatrix:
    """Coherent sum of chirp echoes from ``targets`` on an ``n_az`` x ``n_rg`` grid.

    ``t0`` defaults to the fast time of ``params.r0_first``. A nonzero
    ``fdc_inject`` multiplies every echo by ``exp(j 2 pi fdc_inject eta)``,
    shifting the azimuth spectrum to emulate squint.
    """
    if n_az < 1 or n_rg < 1:
        raise ValueError(f"grid must be non-empty, got {n_az} x {n_rg}")
    if t0 is None:
        t0 = params.t0
    out = np.zeros((n_az, n_rg), np.complex128)
    if targets:
        _k.simulate_into(
            out,
            float(t0),
            params.fr,
            float(eta0),
            params.prf,
            _target_table(targets),
            params.fc,
            params.beta,
            params.t_chirp,
            params.v,
            params.c,
            float(fdc_inject),
        )
    return ComplexMatrix(out, "signal", t0=float(t0), eta0=float(eta0))


def grid_position(params: RadarParams, r0: float, eta: float, t0: float, eta0: float = 0.0):
    """Fractional (azimuth, range) bin where a target at ``(r0, eta)`` focuses."""
    return (eta - eta0) * params.prf, (2.0 * r0 / params.c - t0) * params.fr


def random_scene(
    rng: np.random.Generator,
    n_targets: int,
    params: RadarParams,
    n_az: int,
    n_rg: int,
    aperture_time: float,
    reflectivity=None,
    t0: float | None = None,
    eta0: float = 0.0,
) -> list[PointTarget]:
    """Scatter ``n_targets`` complex-Gaussian scatterers over the grid.

    ``reflectivity(az_frac, rg_frac)`` (fractions in [0, 1)) scales the mean
    power locally; the default is a uniform scene. Positions are uniform
    over the whole image so the focused result is fully developed speckle.
    Test utility, not a radiometric model.
    """
    if t0 is None:
        t0 = params.t0
    az = rng.random(n_targets)
    rg = rng.random(n_targets)
    gain = np.ones(n_targets) if reflectivity is None else np.sqrt(reflectivity(az, rg))
    sigma = gain * (rng.normal(size=n_targets) + 1j * rng.normal(size=n_targets)) / math.sqrt(2)
    eta_c = eta0 + az * n_az / params.prf
    r0 = params.c / 2.0 * (t0 + rg * n_rg / params.fr)
    return [PointTarget(complex(s), float(r), float(e), aperture_time) for s, r, e in zip(sigma, r0, eta_c)]
