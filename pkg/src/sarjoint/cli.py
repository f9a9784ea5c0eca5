"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data/format error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import io as sio
from .denoise import MedianConfig, median_filter
from .doppler import estimate_doppler, spectrum_frequencies
from .enhance import ClaheConfig, clahe, equalize, histogram, joint_denoise_enhance
from .errors import DataFormatError, NumericalError
from .focus import FocusConfig, focus
from .metrics import mse, psnr_from_mse, psnr_sweep
from .radar_model import magnitude_to_gray
from .simulator import simulate_raw

log = logging.getLogger("sarjoint")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3

PRESET = Path(__file__).with_name("presets") / "ers2.par"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _overrides(pairs):
    out = {}
    for item in pairs or []:
        if "=" not in item:
            raise UsageError(f"--set expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _sidecar(args, **extra):
    overrides = _overrides(getattr(args, "set", None))
    overrides.update({k: v for k, v in extra.items() if v is not None})
    path = args.params
    if path is None:
        # simulate writes <raw>.par; fall back to the preset otherwise
        raw = getattr(args, "raw", None)
        beside = Path(f"{raw}.par") if raw else None
        path = beside if beside is not None and beside.is_file() else PRESET
    return sio.read_sidecar(path, overrides)


def _scaling(text: str):
    return "linear_max" if text == "linear_max" else float(text)


def _write_text(path, text: str) -> None:
    if str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _parse_sizes(text: str):
    if ":" in text:
        lo, hi = (int(v) for v in text.split(":", 1))
        return [(s, s) for s in range(lo, hi + 1)]
    sizes = []
    for item in text.split(","):
        p, _, q = item.partition("x")
        sizes.append((int(p), int(q or p)))
    return sizes


def _histogram_csv(before, after) -> str:
    hb, ha = histogram(before), histogram(after)
    return "gray_level,before,after\n" + "".join(f"{v},{hb[v]},{ha[v]}\n" for v in range(256))


# -- subcommands -------------------------------------------------------------


def cmd_simulate(args):
    sidecar = _sidecar(args, n_az=args.n_az, n_rg=args.n_rg)
    if sidecar.n_az is None or sidecar.n_rg is None:
        raise UsageError("grid size needs n_az and n_rg (sidecar or --n-az/--n-rg)")
    targets = sio.read_scene(args.scene)
    raw = simulate_raw(
        targets, sidecar.params, sidecar.n_az, sidecar.n_rg, eta0=args.eta0, fdc_inject=args.fdc_inject
    )
    sio.write_raw(raw, args.out)
    out_sidecar = sio.Sidecar(sidecar.params, sidecar.n_az, sidecar.n_rg, "f32", 0.0)
    sio.write_sidecar(out_sidecar, args.sidecar_out or f"{args.out}.par")
    log.info("wrote %d x %d raw samples for %d targets", sidecar.n_az, sidecar.n_rg, len(targets))


def _load_raw(args):
    sidecar = _sidecar(args)
    return sio.read_raw(args.raw, sidecar), sidecar.params


def cmd_doppler(args):
    raw, params = _load_raw(args)
    est, spectrum = estimate_doppler(raw, params, args.fit_halfwidth, args.poly_order)
    sys.stdout.write(est.as_lines())
    if args.spectrum_csv:
        freqs = spectrum_frequencies(spectrum.size, params.prf)
        order = np.argsort(freqs)
        rows = "".join(f"{float(freqs[i])!r},{float(spectrum[i])!r}\n" for i in order)
        _write_text(args.spectrum_csv, "frequency_hz,power\n" + rows)


def _focus_config(args, raw, params):
    fdc = args.fdc
    if fdc is None:
        est, _ = estimate_doppler(raw, params)
        fdc = est.fdc_combined
        log.info("estimated Doppler centroid %.3f Hz", fdc)
    r_ref = args.rref if args.rref is not None else params.scene_center_range(raw.n_rg)
    return FocusConfig(r_ref, fdc, args.stolt_taps, args.kaiser_beta, args.stolt_method)


def cmd_focus(args):
    if not (args.out or args.pgm):
        raise UsageError("focus needs --out and/or --pgm")
    raw, params = _load_raw(args)
    img = focus(raw, _focus_config(args, raw, params), params)
    if args.out:
        sio.write_complex(img, args.out)
    if args.pgm:
        sio.write_pgm(magnitude_to_gray(img, _scaling(args.scaling)), args.pgm)


def cmd_denoise(args):
    img = sio.read_pgm(args.input)
    sio.write_pgm(median_filter(img, MedianConfig(args.p, args.q)), args.output)


def _clahe_config(args):
    return ClaheConfig(args.tile[0], args.tile[1], args.clip, args.blend)


def cmd_enhance(args):
    img = sio.read_pgm(args.input)
    out = equalize(img) if args.mode == "he" else clahe(img, _clahe_config(args))
    sio.write_pgm(out, args.output)
    if args.histogram_csv:
        _write_text(args.histogram_csv, _histogram_csv(img, out))


def cmd_pipeline(args):
    raw, params = _load_raw(args)
    img = focus(raw, _focus_config(args, raw, params), params)
    gray = magnitude_to_gray(img, _scaling(args.scaling))
    out = joint_denoise_enhance(gray, MedianConfig(args.p, args.q), _clahe_config(args))
    sio.write_pgm(out, args.out)
    if args.focused_pgm:
        sio.write_pgm(gray, args.focused_pgm)
    if args.histogram_csv:
        _write_text(args.histogram_csv, _histogram_csv(gray, out))


def cmd_psnr_sweep(args):
    try:
        sizes = _parse_sizes(args.sizes)
    except ValueError as exc:
        raise UsageError(f"bad --sizes {args.sizes!r}: {exc}") from exc
    rows = psnr_sweep(sio.read_pgm(args.input), sizes)
    _write_text(args.out, "p,q,psnr_db\n" + "".join(f"{r.p},{r.q},{float(r.psnr_db)!r}\n" for r in rows))


def cmd_metrics(args):
    a, b = sio.read_pgm(args.a), sio.read_pgm(args.b)
    value = mse(a, b)
    sys.stdout.write(f"mse={value!r}\npsnr_db={psnr_from_mse(value)!r}\n")


# -- parser ------------------------------------------------------------------


def _add_sidecar_args(sp, raw=True):
    if raw:
        sp.add_argument("--raw", required=True, help="raw I/Q binary")
    sp.add_argument("--params", help="key=value parameter sidecar (default: <raw>.par if present, else the ERS-2 preset)")
    sp.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a sidecar value")


def _add_focus_args(sp):
    sp.add_argument("--rref", type=float, help="reference slant range, m (default: scene centre)")
    sp.add_argument("--fdc", type=float, help="Doppler centroid, Hz (default: estimate)")
    sp.add_argument("--stolt-taps", type=int, default=8)
    sp.add_argument("--stolt-method", choices=("sinc", "linear"), default="sinc")
    sp.add_argument("--kaiser-beta", type=float, default=5.0)
    sp.add_argument("--scaling", default="99.9", help="'linear_max' or a percentile for 8-bit quantization")


def _add_clahe_args(sp):
    sp.add_argument("--tile", type=int, nargs=2, metavar=("W", "H"), default=(16, 16))
    sp.add_argument("--clip", type=float, default=4.0)
    sp.add_argument("--blend", choices=("independent", "bilinear"), default="independent")


def build_parser():
    parser = _Parser(prog="sarjoint", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("simulate", help="synthesize raw echoes from a scene file")
    _add_sidecar_args(sp, raw=False)
    sp.add_argument("--scene", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--sidecar-out")
    sp.add_argument("--n-az", type=int)
    sp.add_argument("--n-rg", type=int)
    sp.add_argument("--eta0", type=float, default=0.0)
    sp.add_argument("--fdc-inject", type=float, default=0.0)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("doppler", help="estimate the Doppler centroid")
    _add_sidecar_args(sp)
    sp.add_argument("--spectrum-csv")
    sp.add_argument("--fit-halfwidth", type=int)
    sp.add_argument("--poly-order", type=int, choices=(2, 4), default=4)
    sp.set_defaults(func=cmd_doppler)

    sp = sub.add_parser("focus", help="omega-k image formation")
    _add_sidecar_args(sp)
    _add_focus_args(sp)
    sp.add_argument("--out", help="complex image container")
    sp.add_argument("--pgm", help="8-bit quick-look")
    sp.set_defaults(func=cmd_focus)

    sp = sub.add_parser("denoise", help="histogram median filter")
    sp.add_argument("input")
    sp.add_argument("output")
    sp.add_argument("--p", type=int, default=16)
    sp.add_argument("--q", type=int, default=16)
    sp.set_defaults(func=cmd_denoise)

    sp = sub.add_parser("enhance", help="histogram equalization / CLAHE")
    sp.add_argument("input")
    sp.add_argument("output")
    sp.add_argument("--mode", choices=("he", "clahe"), default="clahe")
    _add_clahe_args(sp)
    sp.add_argument("--histogram-csv")
    sp.set_defaults(func=cmd_enhance)

    sp = sub.add_parser("pipeline", help="focus, quantize, joint median + CLAHE")
    _add_sidecar_args(sp)
    _add_focus_args(sp)
    _add_clahe_args(sp)
    sp.add_argument("--p", type=int, default=16)
    sp.add_argument("--q", type=int, default=16)
    sp.add_argument("--out", required=True)
    sp.add_argument("--focused-pgm")
    sp.add_argument("--histogram-csv")
    sp.set_defaults(func=cmd_pipeline)

    sp = sub.add_parser("psnr-sweep", help="PSNR of median-filtered vs input image")
    sp.add_argument("input")
    sp.add_argument("--sizes", default="2:20", help="'lo:hi' for p=q, or '3x3,5x5,4x6'")
    sp.add_argument("--out", default="-")
    sp.set_defaults(func=cmd_psnr_sweep)

    sp = sub.add_parser("metrics", help="MSE and PSNR between two images")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.set_defaults(func=cmd_metrics)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        args.func(args)
    except UsageError as exc:
        print(f"sarjoint: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"sarjoint: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DataFormatError, OSError) as exc:
        print(f"sarjoint: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"sarjoint: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
