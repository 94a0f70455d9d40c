"""Compare the compiled kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--seconds 5] [--repeat 7]
"""
import argparse
import timeit

import numpy as np

from submfcc import kernels
from submfcc.audio import AudioSignal
from submfcc.cepstrum import dct_table
from submfcc.config import PipelineConfig
from submfcc.evaluate import compare_signal
from submfcc.melbank import MelBankSpec, build_modified_filterbank


def cases(seconds):
    rng = np.random.default_rng(0)
    n_frames = int(seconds * 1000 / 16) - 1
    spec = MelBankSpec(30, 130.0, 6800.0, 16000, 512)
    std = build_modified_filterbank(spec, 1)
    mod = build_modified_filterbank(spec, 2)
    lo, hi = std.support()
    mlo, mhi = mod.support()
    mags = np.ascontiguousarray(rng.uniform(0, 1, (n_frames, std.n_bins)))
    mmags = np.ascontiguousarray(rng.uniform(0, 1, (n_frames, mod.n_bins)))
    table = dct_table(30)
    logmel = rng.normal(size=(30, n_frames))
    spectrum = np.fft.fft(rng.standard_normal(512))
    a, b = rng.normal(size=(2, 30, n_frames))
    x, y = a.ravel().copy(), b.ravel().copy()
    samples = rng.uniform(-1, 1, 256 * (n_frames + 1))
    window = np.hamming(512)
    return {
        "window_frames (512 x P)": lambda k: k.window_frames(samples, 512, 256, n_frames, window),
        "filterbank_log (30x257)": lambda k: k.filterbank_log(std.weights, lo, hi, mags, 1e-10),
        "fill_bands": lambda k: k.fill_bands(logmel, 24, 0.95),
        "cosine_transform": lambda k: k.cosine_transform(table, logmel),
        "mfcc_fused (standard)": lambda k: k.mfcc_fused(std.weights, lo, hi, mags, 1e-10, 30, 0.95, table),
        "mfcc_fused (modified)": lambda k: k.mfcc_fused(mod.weights, mlo, mhi, mmags, 1e-10, 24, 0.95, table),
        "fold_spectrum (N=512, a=2)": lambda k: k.fold_spectrum(spectrum, 2),
        "centered_moments (case I)": lambda k: k.centered_moments(x, y),
        "centered_moments_columns (case II)": lambda k: k.centered_moments_columns(a, b),
    }, n_frames


def best(fn, repeat):
    timer = timeit.Timer(fn)
    number, _ = timer.autorange()
    return min(timer.repeat(repeat, number)) / number


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seconds", type=float, default=5.0, help="utterance length to simulate")
    parser.add_argument("--repeat", type=int, default=7)
    args = parser.parse_args()

    backends = [("python", kernels.python)]
    if kernels.cython is not None:
        backends.append(("cython", kernels.cython))
    else:
        print("compiled kernels not built; timing the numpy fallback only")

    table, n_frames = cases(args.seconds)
    sr = 16000
    t = np.arange(int(args.seconds * sr)) / sr
    sig = AudioSignal(0.5 * np.sin(2 * np.pi * 440 * t) + 0.01 * np.random.default_rng(1).standard_normal(t.size), sr)
    cfg = PipelineConfig()

    def end_to_end(name):
        return lambda k: compare_signal(sig, cfg, backend=name)

    rows = list(table.items()) + [("compare_signal end to end", None)]
    print(f"{n_frames} frames ({args.seconds:g} s at 16 kHz), best of {args.repeat}")
    header = f"{'kernel':38s}" + "".join(f"{name:>14s}" for name, _ in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10s}"
    print(header)
    for label, fn in rows:
        times = []
        for name, mod in backends:
            call = end_to_end(name) if fn is None else fn
            times.append(best(lambda: call(mod), args.repeat))
        line = f"{label:38s}" + "".join(f"{1e6 * s:12.1f}us" for s in times)
        if len(times) == 2:
            line += f"{times[0] / times[1]:9.2f}x"
        print(line)


if __name__ == "__main__":
    main()
