import dataclasses
import math

import numpy as np
import pytest

from _oracles import mainlobe_widths, upsampled_peak
from sarjoint.errors import NumericalError
from sarjoint.focus import (
    FocusConfig,
    azimuth_frequencies,
    default_config,
    fft2,
    finalize_image,
    focus,
    range_compress,
    range_dechirp,
    range_frequencies,
    reference_multiply,
    stolt_interpolate,
    stolt_source_index,
)
from sarjoint.radar_model import ComplexMatrix, PointTarget
from sarjoint.simulator import simulate_raw


def test_frequency_labels():
    assert range_frequencies(4, 8.0).tolist() == [0, 2, 4, -2]
    assert range_frequencies(5, 10.0).tolist() == [0, 2, 4, -4, -2]
    f = azimuth_frequencies(8, 800.0, fdc=-170.0)
    assert f.min() >= -170 - 400 and f.max() < -170 + 400
    assert np.allclose(np.mod(f - np.arange(8) * 100.0, 800.0), 0)
    assert azimuth_frequencies(4, 400.0).tolist() == [0, 100, -200, -100]


def test_config_validation(params):
    with pytest.raises(ValueError):
        FocusConfig(-1.0)
    for taps in (2, 7):
        with pytest.raises(ValueError):
            FocusConfig(1.0, stolt_taps=taps)
    with pytest.raises(ValueError):
        FocusConfig(1.0, stolt_method="cubic")
    cfg = default_config(params, 1024, fdc=5.0, stolt_taps=16)
    assert cfg.r_ref == pytest.approx(params.scene_center_range(1024)) and cfg.stolt_taps == 16


def test_stages_check_domain(params):
    raw = ComplexMatrix(np.ones((8, 8)))
    cfg = FocusConfig(params.r0_first)
    with pytest.raises(ValueError, match="expected domain"):
        range_dechirp(raw, params)
    with pytest.raises(ValueError, match="expected domain"):
        finalize_image(raw, cfg, params)
    spec = fft2(raw, params)
    assert spec.domain_tag == "freq2d"
    assert stolt_interpolate(spec, cfg, params).domain_tag == "stolt_mapped"
    with pytest.raises(ValueError, match="expected domain"):
        fft2(spec, params)


def test_stages_do_not_touch_input(params, rng):
    data = rng.normal(size=(16, 16)) + 0j
    raw = ComplexMatrix(data)
    focus(raw, FocusConfig(params.scene_center_range(16)), params)
    assert np.array_equal(raw.data, data)


def test_fft2_is_unitary_with_time_reference(params, rng):
    data = rng.normal(size=(16, 32)) + 1j * rng.normal(size=(16, 32))
    raw = ComplexMatrix(data, t0=params.t0)
    spec = fft2(raw, params).data
    ft = range_frequencies(32, params.fr)
    expected = np.fft.fft2(data, norm="ortho") * np.exp(-2j * np.pi * ft * params.t0)
    assert np.allclose(spec, expected, atol=1e-9)


def test_stolt_source_index_formula(params):
    order, src = stolt_source_index(8, 64, 0.0, params)
    ft = range_frequencies(64, params.fr)
    assert np.all(np.diff(ft[order]) > 0)
    feta = azimuth_frequencies(8, params.prf)
    df = params.fr / 64
    for i in (1, 4):
        kaz = (params.c * feta[i] / (2 * params.v)) ** 2
        direct = np.array([math.sqrt((params.fc + f) ** 2 + kaz) - params.fc for f in ft[order]])
        assert np.allclose((src[i] - np.arange(64)) * df, direct - ft[order], rtol=1e-6, atol=1e-6)
    assert np.array_equal(src[0], np.arange(64))


def test_stolt_zero_doppler_row_passes_through(params, rng):
    row = rng.normal(size=64) + 1j * rng.normal(size=64)
    spec = ComplexMatrix(np.vstack([row, row]), "freq2d")
    for method in ("sinc", "linear"):
        out = stolt_interpolate(spec, FocusConfig(params.r0_first, stolt_method=method), params).data
        assert np.allclose(out[0], row, rtol=1e-12, atol=1e-12)


def test_stolt_rejects_short_rows(params):
    spec = ComplexMatrix(np.ones((2, 6)), "freq2d")
    with pytest.raises(ValueError, match="longer"):
        stolt_interpolate(spec, FocusConfig(params.r0_first, stolt_taps=8), params)


class TestEvanescent:
    def test_few_bins_warn_and_zero(self, params, rng):
        slow = dataclasses.replace(params, v=23.5)
        spec = ComplexMatrix(rng.normal(size=(64, 32)) + 0j, "freq2d")
        with pytest.warns(UserWarning, match="evanescent"):
            out = reference_multiply(spec, FocusConfig(slow.r0_first), slow)
        feta = azimuth_frequencies(64, slow.prf)
        dead = np.abs(feta) > 2 * slow.v * (slow.fc + slow.fr / 2) / slow.c
        assert dead.any()
        assert not out.data[dead].any()

    def test_mostly_evanescent_is_numerical_error(self, params):
        crawl = dataclasses.replace(params, v=1.0)
        spec = ComplexMatrix(np.ones((16, 16)), "freq2d")
        with pytest.raises(NumericalError, match="evanescent"):
            reference_multiply(spec, FocusConfig(crawl.r0_first), crawl)


def test_range_compression_gain(params):
    n_rg = 2048
    t = PointTarget(1.0, params.scene_center_range(n_rg), 0.0, 1.0)
    raw = simulate_raw([t], params, 1, n_rg)
    rc = range_compress(raw, params)
    assert rc.domain_tag == "range_dechirped"
    peak = np.abs(rc.data[0])
    assert abs(int(np.argmax(peak)) - n_rg // 2) <= 1
    # unitary transforms: energy of T*fr unit samples, squeezed to ~fr/b bins
    assert peak.max() >= 0.8 * math.sqrt(params.t_chirp * params.bandwidth)
    assert np.sum(peak ** 2) == pytest.approx(np.sum(np.abs(raw.data) ** 2), rel=1e-9)


@pytest.mark.parametrize("method", ["sinc", "linear"])
def test_point_target_small_grid(short_chirp, method):
    p = short_chirp
    n = 256
    r_ref = p.scene_center_range(n)
    t = PointTarget(1.0, r_ref + 20 * p.range_bin_m, 100 / p.prf, 0.12)
    img = focus(simulate_raw([t], p, n, n), FocusConfig(r_ref, stolt_method=method), p)
    _, (i, j) = upsampled_peak(img.data)
    assert (i, j) == (100, n // 2 + 20)
    # rect-window resolution: 0.886 / bandwidth, in bins
    doppler_bw = 2 * p.v ** 2 * t.aperture_time / (p.wavelength * t.r0)
    az_w, rg_w = mainlobe_widths(img.data)
    assert az_w == pytest.approx(0.886 * p.prf / doppler_bw, rel=0.15)
    assert rg_w == pytest.approx(0.886 * p.fr / p.bandwidth, rel=0.15)
    # only the carrier phase of the offset from R_ref survives
    expected = np.exp(-4j * np.pi * p.fc * (t.r0 - r_ref) / p.c)
    assert abs(np.angle(img.data[i, j] / expected)) < 0.05
