"""Time the numba loop kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py --size 512 --repeat 3

Each kernel runs once untimed (JIT compile) and then ``--repeat`` times;
the best wall time is reported. With ``SARJOINT_DISABLE_NUMBA=1`` the loop
kernels are plain Python and are skipped.
"""
import argparse
import sys
import time

import numpy as np

from sarjoint.denoise import pad_for_window
from sarjoint.focus import stolt_source_index
from sarjoint.kernels import USE_NUMBA, loops, new_counters, vector
from sarjoint.radar_model import ers2


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def cases(size, rng):
    img = rng.integers(0, 256, (size, size), dtype=np.uint8)
    padded = np.ascontiguousarray(pad_for_window(img, 16, 16))
    params = ers2()
    _, src = stolt_source_index(size, size, 0.0, params)
    rows = rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
    t = 5e-6
    targets = np.column_stack(
        [
            rng.normal(size=200),
            rng.normal(size=200),
            params.r0_first + rng.uniform(0, size * params.range_bin_m, 200),
            rng.uniform(0, size / params.prf, 200),
            np.full(200, 0.05),
        ]
    )

    def sim(mod):
        out = np.zeros((size, size), complex)
        mod.simulate_into(
            out, params.t0, params.fr, 0.0, params.prf, targets, params.fc,
            params.bandwidth / t, t, params.v, params.c, 0.0,
        )

    return {
        "median 16x16": lambda m: m.median_filter_padded(padded, 16, 16, new_counters()),
        "tile CLAHE": lambda m: m.apply_tile_luts(
            img, m.tile_luts(m.tile_histograms(img, 16, 16, new_counters()), 4.0), 16, 16
        ),
        "joint median+CLAHE": lambda m: m.joint_median_clahe(padded, 16, 16, 16, 16, 4.0, new_counters()),
        "Stolt 8-tap sinc": lambda m: m.stolt_sinc(rows, src, 8, 5.0),
        "Stolt linear": lambda m: m.stolt_linear(rows, src),
        "echo synthesis (200 targets)": sim,
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=512, help="image / grid edge length")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if not USE_NUMBA:
        print("numba disabled: timing the numpy kernels only", file=sys.stderr)
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':30s} {'numba [s]':>10s} {'numpy [s]':>10s} {'speed-up':>9s}")
    for name, run in cases(args.size, rng).items():
        t_np = best_of(lambda: run(vector), args.repeat)
        if USE_NUMBA:
            t_nb = best_of(lambda: run(loops), args.repeat)
            print(f"{name:30s} {t_nb:10.4f} {t_np:10.4f} {t_np / t_nb:8.1f}x")
        else:
            print(f"{name:30s} {'-':>10s} {t_np:10.4f} {'-':>9s}")


if __name__ == "__main__":
    main()
