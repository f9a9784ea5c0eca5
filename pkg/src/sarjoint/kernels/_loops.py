"""Loop kernels, compiled with numba unless ``SARJOINT_DISABLE_NUMBA`` is set.

Every function here has a vectorized twin in ``_vector`` with the same
signature and the same integer results. ``counters`` arrays hold
``[region_builds, single_entry_updates]`` and are incremented in place.
"""
import math

import numpy as np

from .._accel import njit

BUILDS = 0
UPDATES = 1


# -- echo synthesis ---------------------------------------------------------


@njit
def simulate_into(out, t0, fr, eta0, prf, targets, fc, beta, t_chirp, v, c, fdc):
    n_az, n_rg = out.shape
    half_t = 0.5 * t_chirp
    two_pi = 2.0 * math.pi
    for k in range(targets.shape[0]):
        sigma = complex(targets[k, 0], targets[k, 1])
        if sigma == 0:
            continue
        r0 = targets[k, 2]
        eta_c = targets[k, 3]
        half_a = 0.5 * targets[k, 4]
        m_lo = max(0, int(math.floor((eta_c - half_a - eta0) * prf)))
        m_hi = min(n_az, int(math.ceil((eta_c + half_a - eta0) * prf)) + 1)
        for m in range(m_lo, m_hi):
            eta = eta0 + m / prf
            d = eta - eta_c
            if d < -half_a or d >= half_a:
                continue
            r = math.sqrt(r0 * r0 + v * v * d * d)
            tau = 2.0 * r / c
            cyc = 2.0 * fc * r / c
            cyc -= math.floor(cyc)
            dop = fdc * eta
            dop -= math.floor(dop)
            base = two_pi * (dop - cyc)
            n_lo = max(0, int(math.floor((tau - half_t - t0) * fr)))
            n_hi = min(n_rg, int(math.ceil((tau + half_t - t0) * fr)) + 1)
            for n in range(n_lo, n_hi):
                u = t0 + n / fr - tau
                if u < -half_t or u >= half_t:
                    continue
                ph = base + math.pi * beta * u * u
                out[m, n] += sigma * complex(math.cos(ph), math.sin(ph))


# -- histogram primitives ---------------------------------------------------


@njit
def hist_median(counts, total):
    rank = (total + 1) // 2
    acc = 0
    for v in range(256):
        acc += counts[v]
        if acc >= rank:
            return v
    return 255


@njit
def clip_counts(counts, clip_count):
    out = counts.copy()
    excess = 0
    for v in range(256):
        if out[v] > clip_count:
            excess += out[v] - clip_count
            out[v] = clip_count
    if excess > 0:
        step = excess // 256
        rem = excess - step * 256
        for v in range(256):
            out[v] += step
            if v < rem:
                out[v] += 1
    return out


@njit
def lut_from_hist(counts, clip_limit):
    """Clip-limited equalization table; identity for single-valued regions."""
    lut = np.arange(256).astype(np.int64)
    total = 0
    distinct = 0
    for v in range(256):
        total += counts[v]
        if counts[v] > 0:
            distinct += 1
    if distinct <= 1:
        return lut
    limit = clip_limit * total / 256.0
    if limit < total:
        work = clip_counts(counts, max(1, int(limit)))
    else:
        work = counts.copy()
    cdf = 0
    cdf_min = -1
    for v in range(256):
        cdf += work[v]
        if cdf_min < 0 and cdf > 0:
            cdf_min = cdf
    den = total - cdf_min
    if den <= 0:
        return lut
    cdf = 0
    for v in range(256):
        cdf += work[v]
        num = cdf - cdf_min
        if num < 0:
            num = 0
        lut[v] = (510 * num + den) // (2 * den)
    return lut


# -- median filter ----------------------------------------------------------


@njit
def median_filter_padded(padded, p, q, counters):
    """Row-sliding histogram median; ``padded`` carries the replicate border."""
    h = padded.shape[0] - q + 1
    w = padded.shape[1] - p + 1
    out = np.empty((h, w), np.uint8)
    hist = np.zeros(256, np.int64)
    total = p * q
    for y in range(h):
        hist[:] = 0
        for dy in range(q):
            for dx in range(p):
                hist[padded[y + dy, dx]] += 1
        counters[BUILDS] += 1
        counters[UPDATES] += total
        out[y, 0] = hist_median(hist, total)
        for x in range(1, w):
            for dy in range(q):
                hist[padded[y + dy, x - 1]] -= 1
                hist[padded[y + dy, x + p - 1]] += 1
            counters[UPDATES] += 2 * q
            out[y, x] = hist_median(hist, total)
    return out


# -- tile equalization ------------------------------------------------------


@njit
def tile_histograms(pixels, tile_w, tile_h, counters):
    h, w = pixels.shape
    n_ty = (h + tile_h - 1) // tile_h
    n_tx = (w + tile_w - 1) // tile_w
    hists = np.zeros((n_ty, n_tx, 256), np.int64)
    for ty in range(n_ty):
        for tx in range(n_tx):
            for y in range(ty * tile_h, min(h, (ty + 1) * tile_h)):
                for x in range(tx * tile_w, min(w, (tx + 1) * tile_w)):
                    hists[ty, tx, pixels[y, x]] += 1
                    counters[UPDATES] += 1
            counters[BUILDS] += 1
    return hists


@njit
def tile_luts(hists, clip_limit):
    n_ty, n_tx, _ = hists.shape
    luts = np.empty((n_ty, n_tx, 256), np.int64)
    for ty in range(n_ty):
        for tx in range(n_tx):
            luts[ty, tx] = lut_from_hist(hists[ty, tx], clip_limit)
    return luts


@njit
def apply_tile_luts(pixels, luts, tile_w, tile_h):
    h, w = pixels.shape
    out = np.empty((h, w), np.uint8)
    for y in range(h):
        ty = y // tile_h
        for x in range(w):
            out[y, x] = luts[ty, x // tile_w, pixels[y, x]]
    return out


@njit
def joint_median_clahe(padded, p, q, tile_w, tile_h, clip_limit, counters):
    """Median filter and independent-tile CLAHE in a single sweep.

    Each band of ``tile_h`` rows is traversed in a serpentine path so the
    window histogram is built once per band and then only slid; tile
    histograms are accumulated from the median outputs as they are emitted.
    """
    h = padded.shape[0] - q + 1
    w = padded.shape[1] - p + 1
    n_tx = (w + tile_w - 1) // tile_w
    out = np.empty((h, w), np.uint8)
    med = np.empty((tile_h, w), np.uint8)
    hist = np.zeros(256, np.int64)
    band_hist = np.zeros((n_tx, 256), np.int64)
    total = p * q
    for y0 in range(0, h, tile_h):
        y1 = min(h, y0 + tile_h)
        band_hist[:, :] = 0
        hist[:] = 0
        for dy in range(q):
            for dx in range(p):
                hist[padded[y0 + dy, dx]] += 1
        counters[BUILDS] += 1
        counters[UPDATES] += total
        x = 0
        step = 1
        for y in range(y0, y1):
            if y > y0:
                for dx in range(p):
                    hist[padded[y - 1, x + dx]] -= 1
                    hist[padded[y + q - 1, x + dx]] += 1
                counters[UPDATES] += 2 * p
            while True:
                v = hist_median(hist, total)
                med[y - y0, x] = v
                band_hist[x // tile_w, v] += 1
                counters[UPDATES] += 1
                nx = x + step
                if nx < 0 or nx >= w:
                    break
                if step > 0:
                    for dy in range(q):
                        hist[padded[y + dy, x]] -= 1
                        hist[padded[y + dy, x + p]] += 1
                else:
                    for dy in range(q):
                        hist[padded[y + dy, x + p - 1]] -= 1
                        hist[padded[y + dy, x - 1]] += 1
                counters[UPDATES] += 2 * q
                x = nx
            step = -step
        for tx in range(n_tx):
            lut = lut_from_hist(band_hist[tx], clip_limit)
            for y in range(y0, y1):
                for xx in range(tx * tile_w, min(w, (tx + 1) * tile_w)):
                    out[y, xx] = lut[med[y - y0, xx]]
    return out


# -- Stolt resampling -------------------------------------------------------


@njit
def bessel_i0(x):
    y = 0.25 * x * x
    term = 1.0
    total = 1.0
    k = 1
    while term > 1e-17 * total:
        term *= y / (k * k)
        total += term
        k += 1
    return total


@njit
def stolt_sinc(rows, src, taps, kaiser_beta):
    """Kaiser-windowed sinc resampling of each row at fractional indices ``src``."""
    n_rows, n = rows.shape
    out = np.zeros((n_rows, n), np.complex128)
    half = taps // 2
    norm = bessel_i0(kaiser_beta)
    edge = 1e-6
    for i in range(n_rows):
        for k in range(n):
            u = src[i, k]
            if u < -edge or u > n - 1 + edge:
                continue
            base = int(math.floor(u))
            acc = 0j
            wsum = 0.0
            for j in range(base - half + 1, base + half + 1):
                x = u - j
                if x == 0.0:
                    wt = 1.0
                else:
                    wt = math.sin(math.pi * x) / (math.pi * x)
                r = x / half
                arg = 1.0 - r * r
                if arg < 0.0:
                    arg = 0.0
                wt *= bessel_i0(kaiser_beta * math.sqrt(arg)) / norm
                wsum += wt
                if 0 <= j < n:
                    acc += wt * rows[i, j]
            out[i, k] = acc / wsum
    return out


@njit
def stolt_linear(rows, src):
    n_rows, n = rows.shape
    out = np.zeros((n_rows, n), np.complex128)
    edge = 1e-6
    for i in range(n_rows):
        for k in range(n):
            u = src[i, k]
            if u < -edge or u > n - 1 + edge:
                continue
            u = min(max(u, 0.0), n - 1.0)
            base = min(int(math.floor(u)), n - 2)
            frac = u - base
            out[i, k] = (1.0 - frac) * rows[i, base] + frac * rows[i, base + 1]
    return out
