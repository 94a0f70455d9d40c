"""Pure-numpy implementations of the numeric kernels.

Every function here has a twin with the same signature in ``_ckernels.pyx``.
Array arguments are float64 (complex128 for spectra) and C-contiguous.
"""
import numpy as np

NAME = "python"


def window_frames(samples, frame_len, hop, n_frames, window):
    """Frame-major (P x N) windowed frames, ``out[p, i] = x[p*hop + i] * w[i]``."""
    view = np.lib.stride_tricks.sliding_window_view(samples, frame_len)[::hop][:n_frames]
    return view * window[None, :]


def filterbank_log(weights, lo, hi, mags_t, floor):
    """Log filter-bank energies.

    ``mags_t`` is frame-major (P x K). Returns an F x P matrix of
    ``ln(max(weights @ mags, floor))``. ``lo``/``hi`` (per-row support) are
    accepted for signature parity and ignored here.
    """
    energies = weights @ mags_t.T
    return np.log(np.maximum(energies, floor))


def fill_bands(logmel, active, decay):
    out = np.array(logmel, dtype=np.float64, copy=True)
    n_filters = out.shape[0]
    if active < n_filters:
        powers = decay ** np.arange(1, n_filters - active + 1, dtype=np.float64)
        out[active:] = powers[:, None] * out[active - 1][None, :]
    return out


def cosine_transform(table, logmel):
    return table @ logmel


def mfcc_fused(weights, lo, hi, mags_t, floor, active, decay, table):
    """Log energies, fill-in and cosine transform in one call.

    Returns ``(logmel, coeffs)``, both F x P; ``logmel`` is after fill-in.
    """
    logmel = filterbank_log(weights, lo, hi, mags_t, floor)
    logmel = fill_bands(logmel, active, decay)
    return logmel, table @ logmel


def fold_spectrum(spectrum, alpha):
    short = spectrum.shape[0] // alpha
    return spectrum.reshape(alpha, short).sum(axis=0) / alpha


def centered_moments(x, y):
    """Return ``(sxx, syy, sxy)`` of mean-removed vectors (two-pass)."""
    dx = x - x.mean()
    dy = y - y.mean()
    return float(dx @ dx), float(dy @ dy), float(dx @ dy)


def centered_moments_columns(a, b):
    """Column-wise :func:`centered_moments`; returns three length-P arrays."""
    da = a - a.mean(axis=0)
    db = b - b.mean(axis=0)
    return (da * da).sum(axis=0), (db * db).sum(axis=0), (da * db).sum(axis=0)
