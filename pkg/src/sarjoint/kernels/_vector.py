"""Pure-numpy kernels mirroring ``_loops`` (same signatures, same results)."""
import numpy as np

from ._loops import BUILDS, UPDATES

_ROW_CHUNK = 64


def simulate_into(out, t0, fr, eta0, prf, targets, fc, beta, t_chirp, v, c, fdc):
    n_az, n_rg = out.shape
    half_t = 0.5 * t_chirp
    for sre, sim, r0, eta_c, aperture in targets:
        sigma = complex(sre, sim)
        if sigma == 0:
            continue
        half_a = 0.5 * aperture
        m_lo = max(0, int(np.floor((eta_c - half_a - eta0) * prf)))
        m_hi = min(n_az, int(np.ceil((eta_c + half_a - eta0) * prf)) + 1)
        if m_hi <= m_lo:
            continue
        m = np.arange(m_lo, m_hi)
        eta = eta0 + m / prf
        d = eta - eta_c
        keep = (d >= -half_a) & (d < half_a)
        m, eta, d = m[keep], eta[keep], d[keep]
        if m.size == 0:
            continue
        r = np.sqrt(r0 * r0 + v * v * d * d)
        tau = 2.0 * r / c
        cyc = 2.0 * fc * r / c
        cyc -= np.floor(cyc)
        dop = fdc * eta
        dop -= np.floor(dop)
        base = 2.0 * np.pi * (dop - cyc)
        n_lo = max(0, int(np.floor((tau.min() - half_t - t0) * fr)))
        n_hi = min(n_rg, int(np.ceil((tau.max() + half_t - t0) * fr)) + 1)
        if n_hi <= n_lo:
            continue
        n = np.arange(n_lo, n_hi)
        u = (t0 + n / fr)[None, :] - tau[:, None]
        inside = (u >= -half_t) & (u < half_t)
        ph = base[:, None] + np.pi * beta * u * u
        block = np.where(inside, sigma * (np.cos(ph) + 1j * np.sin(ph)), 0)
        out[m, n_lo:n_hi] += block


def hist_median(counts, total):
    rank = (total + 1) // 2
    return int(np.argmax(np.cumsum(counts) >= rank))


def clip_counts(counts, clip_count):
    counts = np.asarray(counts, dtype=np.int64)
    excess = int(np.maximum(counts - clip_count, 0).sum())
    out = np.minimum(counts, clip_count)
    if excess > 0:
        step, rem = divmod(excess, 256)
        out += step
        out[:rem] += 1
    return out


def lut_from_hist(counts, clip_limit):
    counts = np.asarray(counts, dtype=np.int64)
    lut = np.arange(256, dtype=np.int64)
    total = int(counts.sum())
    if np.count_nonzero(counts) <= 1:
        return lut
    limit = clip_limit * total / 256.0
    work = clip_counts(counts, max(1, int(limit))) if limit < total else counts
    cdf = np.cumsum(work)
    cdf_min = int(cdf[np.argmax(cdf > 0)])
    den = total - cdf_min
    if den <= 0:
        return lut
    num = np.maximum(cdf - cdf_min, 0)
    return (510 * num + den) // (2 * den)


def median_filter_padded(padded, p, q, counters):
    """Histogram median with column histograms slid down the image.

    Each output row's window histograms come from a prefix sum over the
    per-column histograms of the current ``q``-row strip.
    """
    h = padded.shape[0] - q + 1
    w = padded.shape[1] - p + 1
    wp = padded.shape[1]
    cols = np.arange(wp)
    colhist = np.zeros((wp, 256), np.int64)
    for dy in range(q):
        np.add.at(colhist, (cols, padded[dy]), 1)
    counters[BUILDS] += 1
    counters[UPDATES] += q * wp
    rank = (p * q + 1) // 2
    out = np.empty((h, w), np.uint8)
    prefix = np.zeros((wp + 1, 256), np.int64)
    for y in range(h):
        if y > 0:
            colhist[cols, padded[y - 1]] -= 1
            colhist[cols, padded[y + q - 1]] += 1
            counters[UPDATES] += 2 * wp
        np.cumsum(colhist, axis=0, out=prefix[1:])
        window = prefix[p:] - prefix[:-p]
        out[y] = np.argmax(np.cumsum(window, axis=1) >= rank, axis=1)
    return out


def tile_histograms(pixels, tile_w, tile_h, counters):
    h, w = pixels.shape
    n_ty = -(-h // tile_h)
    n_tx = -(-w // tile_w)
    ty = (np.arange(h) // tile_h)[:, None]
    tx = (np.arange(w) // tile_w)[None, :]
    key = ((ty * n_tx + tx) * 256 + pixels).ravel()
    hists = np.bincount(key, minlength=n_ty * n_tx * 256).reshape(n_ty, n_tx, 256)
    counters[BUILDS] += n_ty * n_tx
    counters[UPDATES] += h * w
    return hists.astype(np.int64)


def tile_luts(hists, clip_limit):
    n_ty, n_tx, _ = hists.shape
    luts = np.empty((n_ty, n_tx, 256), np.int64)
    for ty in range(n_ty):
        for tx in range(n_tx):
            luts[ty, tx] = lut_from_hist(hists[ty, tx], clip_limit)
    return luts


def apply_tile_luts(pixels, luts, tile_w, tile_h):
    h, w = pixels.shape
    ty = (np.arange(h) // tile_h)[:, None]
    tx = (np.arange(w) // tile_w)[None, :]
    return luts[ty, tx, pixels].astype(np.uint8)


def joint_median_clahe(padded, p, q, tile_w, tile_h, clip_limit, counters):
    """Fused pass: tile histograms are accumulated from each median row."""
    h = padded.shape[0] - q + 1
    w = padded.shape[1] - p + 1
    n_tx = -(-w // tile_w)
    tx = np.arange(w) // tile_w
    med = median_filter_padded(padded, p, q, counters)
    n_ty = -(-h // tile_h)
    hists = np.zeros((n_ty, n_tx, 256), np.int64)
    for y in range(h):
        hists[y // tile_h] += np.bincount(tx * 256 + med[y], minlength=n_tx * 256).reshape(n_tx, 256)
        counters[UPDATES] += w
    return apply_tile_luts(med, tile_luts(hists, clip_limit), tile_w, tile_h)


def _kaiser_sinc(x, half, kaiser_beta):
    r = x / half
    arg = np.clip(1.0 - r * r, 0.0, None)
    return np.sinc(x) * np.i0(kaiser_beta * np.sqrt(arg)) / np.i0(kaiser_beta)


def stolt_sinc(rows, src, taps, kaiser_beta):
    n_rows, n = rows.shape
    half = taps // 2
    offsets = np.arange(-half + 1, half + 1)
    out = np.zeros((n_rows, n), np.complex128)
    for start in range(0, n_rows, _ROW_CHUNK):
        sl = slice(start, min(n_rows, start + _ROW_CHUNK))
        u = src[sl]
        valid = (u >= -1e-6) & (u <= n - 1 + 1e-6)
        j = np.floor(u).astype(np.int64)[..., None] + offsets
        wt = _kaiser_sinc(u[..., None] - j, half, kaiser_beta)
        wsum = wt.sum(axis=-1)
        inband = (j >= 0) & (j < n)
        jc = np.clip(j, 0, n - 1)
        vals = rows[sl][np.arange(jc.shape[0])[:, None, None], jc]
        acc = (np.where(inband, wt, 0.0) * vals).sum(axis=-1)
        out[sl] = np.where(valid, acc / wsum, 0)
    return out


def stolt_linear(rows, src):
    n_rows, n = rows.shape
    valid = (src >= -1e-6) & (src <= n - 1 + 1e-6)
    u = np.clip(src, 0.0, n - 1.0)
    base = np.minimum(np.floor(u).astype(np.int64), n - 2)
    frac = u - base
    lo = np.take_along_axis(rows, base, axis=1)
    hi = np.take_along_axis(rows, base + 1, axis=1)
    return np.where(valid, (1.0 - frac) * lo + frac * hi, 0).astype(np.complex128)
