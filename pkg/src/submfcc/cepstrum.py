"""Log-Mel energies, band fill-in, cepstral transform and the two pipelines.

Matrices are plain arrays: log-Mel spectra and MFCCs are F x P, one column per
frame, row ``r - 1`` holding coefficient ``r`` for ``r = 1..F``.
"""
from functools import lru_cache

import numpy as np

from . import kernels
from .dsp import MagnitudeSpectrogram, frame_signal, hamming_window, magnitude_spectrum
from .melbank import MelBankSpec, build_filterbank, build_modified_filterbank


def _k(backend):
    return kernels.active if backend is None else kernels.select(backend)


def _mags_t(spectrogram):
    mags = spectrogram.mags if isinstance(spectrogram, MagnitudeSpectrogram) else spectrogram
    return np.ascontiguousarray(np.asarray(mags, dtype=np.float64).T)


@lru_cache(maxsize=32)
def _cos_table(n):
    r = np.arange(1, n + 1)[:, None]
    m = np.arange(1, n + 1)[None, :]
    table = np.cos(r * (2 * m - 1) * np.pi / (2 * n))
    table.setflags(write=False)
    return table


@lru_cache(maxsize=32)
def _window(n, kind):
    w = hamming_window(n, kind)
    w.setflags(write=False)
    return w


def dct_table(n):
    """``table[r-1, m-1] = cos(r (2m - 1) pi / 2n)``, without normalization."""
    return _cos_table(int(n)).copy()


def log_mel_energies(bank, spectrogram, log_floor=1e-10, backend=None):
    """``ln(max(sum_k M[m, k] |X_p(k)|, log_floor))`` for every band and frame."""
    mags_t = _mags_t(spectrogram)
    if mags_t.shape[1] != bank.n_bins:
        raise ValueError(f"bank has {bank.n_bins} bins, spectrogram has {mags_t.shape[1]}")
    lo, hi = bank.support()
    return _k(backend).filterbank_log(np.ascontiguousarray(bank.weights), lo, hi, mags_t, float(log_floor))


def fill_inactive_bands(logmel, active_count, fill_decay=0.95, backend=None):
    """Replace rows above `active_count` by ``decay**(m - F_xi) * row F_xi``.

    Operates on the log values themselves, negative ones included.
    """
    logmel = np.ascontiguousarray(logmel, dtype=np.float64)
    if not 1 <= active_count <= logmel.shape[0]:
        raise ValueError(f"active_count must be in [1, {logmel.shape[0]}], got {active_count}")
    return _k(backend).fill_bands(logmel, int(active_count), float(fill_decay))


def dct_mfcc(logmel, backend=None):
    logmel = np.ascontiguousarray(logmel, dtype=np.float64)
    if logmel.ndim == 1:
        logmel = logmel[:, None]
    return _k(backend).cosine_transform(_cos_table(logmel.shape[0]), logmel)


def _run(signal, cfg, bank, frame_len, backend):
    hop = cfg.hop_length(frame_len)
    frames = frame_signal(signal, frame_len, hop)
    spec = magnitude_spectrum(frames, _window(frame_len, cfg.window), signal.sample_rate, backend)
    lo, hi = bank.support()
    if bank.active_count < 1:
        raise ValueError("no Mel filter lies below the subsampled Nyquist frequency")
    return _k(backend).mfcc_fused(
        np.ascontiguousarray(bank.weights), lo, hi, _mags_t(spec), float(cfg.log_floor),
        int(bank.active_count), float(cfg.fill_decay), _cos_table(bank.n_filters),
    )


@lru_cache(maxsize=64)
def _bank(spec, alpha):
    bank = build_modified_filterbank(spec, alpha)
    bank.weights.setflags(write=False)
    return bank


def original_bank(cfg, sample_rate):
    n = cfg.frame_length(sample_rate)
    return _bank(MelBankSpec(cfg.n_filters, cfg.f_min, cfg.f_max, sample_rate, n), 1)


def subsampled_bank(cfg, sample_rate):
    """Modified bank for audio already decimated to `sample_rate` = f_s / alpha."""
    full_rate = sample_rate * cfg.alpha
    n = cfg.full_rate_frame(full_rate)
    return _bank(MelBankSpec(cfg.n_filters, cfg.f_min, cfg.f_max, full_rate, n), cfg.alpha)


def mfcc_analysis(signal, cfg, subsampled=False, backend=None):
    """Return ``(logmel, mfcc, bank)`` for one signal.

    With ``subsampled=True`` the signal is taken to be decimated by
    ``cfg.alpha``: frames keep their duration (N/alpha samples), the modified
    bank is used and the inactive bands are filled in.
    """
    if subsampled:
        bank = subsampled_bank(cfg, signal.sample_rate)
        frame_len = cfg.frame_length(signal.sample_rate)
    else:
        bank = original_bank(cfg, signal.sample_rate)
        frame_len = cfg.frame_length(signal.sample_rate)
    logmel, coeffs = _run(signal, cfg, bank, frame_len, backend)
    return logmel, coeffs, bank


def mfcc_pipeline(signal, cfg, backend=None):
    """F x P MFCCs of full-rate speech with the standard bank."""
    return mfcc_analysis(signal, cfg, False, backend)[1]


def mfcc_subsampled_pipeline(signal, cfg, backend=None):
    """F x P MFCCs of speech decimated by ``cfg.alpha``, modified bank plus fill-in."""
    return mfcc_analysis(signal, cfg, True, backend)[1]
