"""File formats: parameter sidecar, scene list, raw I/Q, PGM, complex container.

Raw I/Q layout (``read_raw``/``write_raw``): azimuth lines stored one after
another, each line holding ``n_rg`` interleaved ``I, Q`` pairs, little-endian.

Complex container (``write_complex``/``read_complex``): a 48-byte header

    magic "SARC" | version u32 | n_az u64 | n_rg u64 | t0 f64 | eta0 f64 |
    domain_tag u32 | reserved u32

followed by the raw-layout payload in ``f32``.
"""
from __future__ import annotations

import os
import struct
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataFormatError
from .radar_model import DOMAIN_ORDER, ComplexMatrix, GrayImage, PointTarget, RadarParams

SIDECAR_KEYS = {
    "fc_hz": "fc",
    "fr_hz": "fr",
    "prf_hz": "prf",
    "beta_hz_per_s": "beta",
    "chirp_s": "t_chirp",
    "v_mps": "v",
    "bandwidth_hz": "bandwidth",
    "r0_m": "r0_first",
}
LAYOUT_KEYS = ("n_az", "n_rg", "sample_format", "sample_offset")

SAMPLE_FORMATS = {"i8": np.dtype("<i1"), "i16": np.dtype("<i2"), "f32": np.dtype("<f4")}

COMPLEX_MAGIC = b"SARC"
COMPLEX_VERSION = 1
_COMPLEX_HEADER = struct.Struct("<4sIQQddII")


@dataclass(frozen=True)
class Sidecar:
    params: RadarParams
    n_az: int | None = None
    n_rg: int | None = None
    sample_format: str = "f32"
    sample_offset: float = 0.0


def _parse_pairs(text: str) -> dict[str, str]:
    pairs = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DataFormatError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in SIDECAR_KEYS and key not in LAYOUT_KEYS:
            raise DataFormatError(f"line {lineno}: unknown key {key!r}")
        pairs[key] = value
    return pairs


def parse_sidecar(text: str, overrides: dict | None = None) -> Sidecar:
    """Parse ``key = value`` text; ``overrides`` (same keys) take precedence."""
    pairs = _parse_pairs(text)
    for key, value in (overrides or {}).items():
        if value is not None:
            pairs[key] = str(value)
    missing = [k for k in SIDECAR_KEYS if k not in pairs]
    if missing:
        raise DataFormatError(f"sidecar is missing keys: {', '.join(missing)}")
    try:
        params = RadarParams(**{SIDECAR_KEYS[k]: float(pairs[k]) for k in SIDECAR_KEYS})
        n_az = int(pairs["n_az"]) if "n_az" in pairs else None
        n_rg = int(pairs["n_rg"]) if "n_rg" in pairs else None
        offset = float(pairs.get("sample_offset", 0.0))
    except ValueError as exc:
        raise DataFormatError(f"bad sidecar value: {exc}") from exc
    fmt = pairs.get("sample_format", "f32")
    if fmt not in SAMPLE_FORMATS:
        raise DataFormatError(f"unknown sample_format {fmt!r} (expected one of {sorted(SAMPLE_FORMATS)})")
    return Sidecar(params, n_az, n_rg, fmt, offset)


def read_sidecar(path, overrides: dict | None = None) -> Sidecar:
    return parse_sidecar(Path(path).read_text(), overrides)


def format_sidecar(sidecar: Sidecar) -> str:
    p = sidecar.params
    lines = [f"{key} = {getattr(p, attr)!r}" for key, attr in SIDECAR_KEYS.items()]
    if sidecar.n_az is not None:
        lines.append(f"n_az = {sidecar.n_az}")
    if sidecar.n_rg is not None:
        lines.append(f"n_rg = {sidecar.n_rg}")
    lines.append(f"sample_format = {sidecar.sample_format}")
    if sidecar.sample_offset:
        lines.append(f"sample_offset = {sidecar.sample_offset!r}")
    return "\n".join(lines) + "\n"


def write_sidecar(sidecar: Sidecar, path) -> None:
    Path(path).write_text(format_sidecar(sidecar))


def parse_scene(text: str) -> list[PointTarget]:
    """One target per line: ``sigma_re sigma_im r0_m eta_c_s aperture_s``."""
    targets = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.replace(",", " ").split()
        if len(fields) != 5:
            raise DataFormatError(f"scene line {lineno}: expected 5 fields, got {len(fields)}")
        try:
            re_, im_, r0, eta_c, aperture = map(float, fields)
            targets.append(PointTarget(complex(re_, im_), r0, eta_c, aperture))
        except ValueError as exc:
            raise DataFormatError(f"scene line {lineno}: {exc}") from exc
    return targets


def read_scene(path) -> list[PointTarget]:
    return parse_scene(Path(path).read_text())


def format_scene(targets) -> str:
    return "".join(
        f"{t.sigma.real!r} {t.sigma.imag!r} {t.r0!r} {t.eta_c!r} {t.aperture_time!r}\n" for t in targets
    )


# -- raw I/Q ---------------------------------------------------------------


def read_raw(path, sidecar: Sidecar) -> ComplexMatrix:
    """Load interleaved I/Q samples described by ``sidecar``."""
    if sidecar.n_az is None or sidecar.n_rg is None:
        raise DataFormatError("sidecar must define n_az and n_rg to read raw data")
    dtype = SAMPLE_FORMATS[sidecar.sample_format]
    expected = sidecar.n_az * sidecar.n_rg * 2 * dtype.itemsize
    actual = os.path.getsize(path)
    if actual != expected:
        raise DataFormatError(
            f"{path}: expected {expected} bytes "
            f"({sidecar.n_az}x{sidecar.n_rg}x2x{dtype.itemsize}, {sidecar.sample_format}), got {actual}"
        )
    flat = np.fromfile(path, dtype=dtype).astype(np.float64)
    if sidecar.sample_format != "f32":
        flat -= sidecar.sample_offset
    pairs = flat.reshape(sidecar.n_az, sidecar.n_rg, 2)
    data = pairs[..., 0] + 1j * pairs[..., 1]
    return ComplexMatrix(data, "signal", t0=sidecar.params.t0, eta0=0.0)


def _interleave(data: np.ndarray, dtype) -> bytes:
    out = np.empty(data.shape + (2,), dtype=dtype)
    out[..., 0] = data.real
    out[..., 1] = data.imag
    return out.tobytes()


def write_raw(img: ComplexMatrix, path) -> None:
    """Write ``f32`` interleaved I/Q in the ``read_raw`` layout."""
    Path(path).write_bytes(_interleave(img.data, SAMPLE_FORMATS["f32"]))


# -- complex container -----------------------------------------------------


def complex_to_bytes(img: ComplexMatrix) -> bytes:
    header = _COMPLEX_HEADER.pack(
        COMPLEX_MAGIC,
        COMPLEX_VERSION,
        img.n_az,
        img.n_rg,
        float(img.t0),
        float(img.eta0),
        DOMAIN_ORDER.index(img.domain_tag),
        0,
    )
    return header + _interleave(img.data, SAMPLE_FORMATS["f32"])


def complex_from_bytes(blob: bytes) -> ComplexMatrix:
    if len(blob) < _COMPLEX_HEADER.size:
        raise DataFormatError("complex container truncated inside header")
    magic, version, n_az, n_rg, t0, eta0, tag, _ = _COMPLEX_HEADER.unpack_from(blob)
    if magic != COMPLEX_MAGIC:
        raise DataFormatError(f"bad magic {magic!r}, expected {COMPLEX_MAGIC!r}")
    if version != COMPLEX_VERSION:
        raise DataFormatError(f"unsupported container version {version}")
    if tag >= len(DOMAIN_ORDER):
        raise DataFormatError(f"bad domain tag code {tag}")
    payload = blob[_COMPLEX_HEADER.size:]
    expected = n_az * n_rg * 8
    if len(payload) != expected:
        raise DataFormatError(f"payload is {len(payload)} bytes, expected {expected}")
    pairs = np.frombuffer(payload, dtype=SAMPLE_FORMATS["f32"]).reshape(n_az, n_rg, 2)
    data = np.empty((n_az, n_rg), np.complex64)
    data.real = pairs[..., 0]
    data.imag = pairs[..., 1]
    return ComplexMatrix(data, DOMAIN_ORDER[tag], t0, eta0)


def write_complex(img: ComplexMatrix, path) -> None:
    Path(path).write_bytes(complex_to_bytes(img))


def read_complex(path) -> ComplexMatrix:
    return complex_from_bytes(Path(path).read_bytes())


# -- PGM -------------------------------------------------------------------


def pgm_bytes(img: GrayImage) -> bytes:
    return f"P5\n{img.width} {img.height}\n255\n".encode("ascii") + img.pixels.tobytes()


def pgm_from_bytes(blob: bytes) -> GrayImage:
    tokens = []
    pos = 0
    while len(tokens) < 4:
        while pos < len(blob) and (blob[pos:pos + 1].isspace() or blob[pos:pos + 1] == b"#"):
            if blob[pos:pos + 1] == b"#":
                end = blob.find(b"\n", pos)
                pos = len(blob) if end < 0 else end
            pos += 1
        start = pos
        while pos < len(blob) and not blob[pos:pos + 1].isspace() and blob[pos:pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise DataFormatError("PGM header truncated")
        tokens.append(blob[start:pos])
    if tokens[0] != b"P5":
        raise DataFormatError(f"not a binary PGM (magic {tokens[0]!r})")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError as exc:
        raise DataFormatError(f"malformed PGM header: {exc}") from exc
    if maxval != 255:
        raise DataFormatError(f"only maxval 255 is supported, got {maxval}")
    # exactly one whitespace byte separates the header from the raster
    payload = blob[pos + 1:]
    if len(payload) != width * height:
        raise DataFormatError(f"PGM payload is {len(payload)} bytes, expected {width * height}")
    pixels = np.frombuffer(payload, dtype=np.uint8).reshape(height, width)
    return GrayImage(pixels)


def write_pgm(img: GrayImage, path) -> None:
    """Write binary PGM; ``path == "-"`` writes to stdout."""
    blob = pgm_bytes(img)
    if str(path) == "-":
        sys.stdout.buffer.write(blob)
        sys.stdout.buffer.flush()
    else:
        Path(path).write_bytes(blob)


def read_pgm(path) -> GrayImage:
    if str(path) == "-":
        return pgm_from_bytes(sys.stdin.buffer.read())
    return pgm_from_bytes(Path(path).read_bytes())
