"""Mel scale and triangular Mel filter banks.

Two constructions share one evaluator: the standard bank on an N-point grid,
and the modified bank for speech subsampled by an integer factor. The
modified bank keeps the original centers and edges in Hz, is evaluated on the
shorter N/alpha grid (whose bin spacing is unchanged), and drops every filter
whose center is not below the reduced Nyquist frequency.
"""
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np


class MelBankWarning(UserWarning):
    """A triangle covers no bins of the frequency grid."""


def hz_to_mel(f):
    f = np.asarray(f, dtype=np.float64)
    if np.any(f < 0):
        raise ValueError("frequency must be non-negative")
    out = 2595.0 * np.log10(1.0 + f / 700.0)
    return float(out) if out.ndim == 0 else out


def mel_to_hz(mel):
    mel = np.asarray(mel, dtype=np.float64)
    if np.any(mel < 0):
        raise ValueError("mel value must be non-negative")
    out = 700.0 * (10.0 ** (mel / 2595.0) - 1.0)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class MelBankSpec:
    """Filter bank parameters: `n_fft` is the frame length N of the grid."""

    n_filters: int
    f_min: float
    f_max: float
    sample_rate: int
    n_fft: int

    def __post_init__(self):
        if self.n_filters < 1:
            raise ValueError("n_filters must be >= 1")
        if not 0 <= self.f_min < self.f_max <= self.sample_rate / 2:
            raise ValueError(
                f"need 0 <= f_min < f_max <= sample_rate/2, got "
                f"f_min={self.f_min}, f_max={self.f_max}, sample_rate={self.sample_rate}"
            )
        if self.n_fft < 2:
            raise ValueError("n_fft must be >= 2")

    @property
    def n_bins(self):
        return self.n_fft // 2 + 1

    @property
    def bin_hz(self):
        return self.sample_rate / self.n_fft


@dataclass(frozen=True)
class MelFilterBank:
    weights: np.ndarray        # F x K
    centers_hz: np.ndarray     # F
    edges_hz: np.ndarray       # F + 2, outer edges included
    active_count: int
    sample_rate: int           # rate of the grid the bank multiplies
    bin_hz: float

    @property
    def n_filters(self):
        return self.weights.shape[0]

    @property
    def n_bins(self):
        return self.weights.shape[1]

    def support(self):
        """Per-row ``(lo, hi)`` index bounds of the nonzero weights."""
        return self._support

    @cached_property
    def _support(self):
        nz = self.weights > 0
        any_nz = nz.any(axis=1)
        lo = np.where(any_nz, nz.argmax(axis=1), 0)
        hi = np.where(any_nz, self.n_bins - nz[:, ::-1].argmax(axis=1), 0)
        return lo.astype(np.int_), hi.astype(np.int_)

    def to_dict(self):
        return {
            "n_filters": int(self.n_filters),
            "n_bins": int(self.n_bins),
            "sample_rate": int(self.sample_rate),
            "bin_hz": float(self.bin_hz),
            "active_count": int(self.active_count),
            "centers_hz": [float(c) for c in self.centers_hz],
            "edges_hz": [float(e) for e in self.edges_hz],
        }


def center_frequencies(spec):
    """All F + 2 triangle vertices in Hz, equally spaced in mel from f_min to f_max."""
    mel_lo = hz_to_mel(spec.f_min)
    mel_hi = hz_to_mel(spec.f_max)
    step = (mel_hi - mel_lo) / (spec.n_filters + 1)
    edges = mel_to_hz(mel_lo + step * np.arange(spec.n_filters + 2))
    edges[0] = spec.f_min
    edges[-1] = spec.f_max
    return edges


def _triangles(edges, freqs):
    lower = edges[:-2, None]
    center = edges[1:-1, None]
    upper = edges[2:, None]
    f = freqs[None, :]
    rising = (f - lower) / (center - lower)
    falling = (f - upper) / (center - upper)
    w = np.zeros((edges.shape[0] - 2, freqs.shape[0]))
    up = (f >= lower) & (f < center)
    down = (f >= center) & (f < upper)
    w[up] = np.broadcast_to(rising, w.shape)[up]
    w[down] = np.broadcast_to(falling, w.shape)[down]
    return w


def _warn_empty(weights, label):
    empty = np.flatnonzero(~(weights > 0).any(axis=1))
    if empty.size:
        warnings.warn(
            f"{label}: filters {[int(i) + 1 for i in empty]} cover no frequency bins",
            MelBankWarning,
            stacklevel=3,
        )


def build_filterbank(spec):
    """Standard F x (N/2 + 1) triangular bank on the grid ``k * f_s / N``."""
    edges = center_frequencies(spec)
    freqs = np.arange(spec.n_bins) * spec.bin_hz
    weights = _triangles(edges, freqs)
    _warn_empty(weights, "mel filter bank")
    return MelFilterBank(weights, edges[1:-1].copy(), edges, spec.n_filters,
                         spec.sample_rate, spec.bin_hz)


def build_modified_filterbank(spec, alpha):
    """Filter bank for speech subsampled by the integer factor `alpha`.

    `spec` describes the full-rate configuration. The returned bank has
    ``(N/alpha)/2 + 1`` columns at the unchanged spacing ``f_s/N``. Rows whose
    center is at or above ``f_s/(2 alpha)`` are zero; ``active_count`` is the
    number of remaining rows, which are always the leading ones.
    """
    if int(alpha) != alpha or alpha < 1:
        raise ValueError(f"alpha must be a positive integer, got {alpha}")
    alpha = int(alpha)
    if spec.n_fft % alpha:
        raise ValueError(f"alpha={alpha} does not divide the frame length {spec.n_fft}")
    if alpha == 1:
        return build_filterbank(spec)
    edges = center_frequencies(spec)
    n_short = spec.n_fft // alpha
    nyquist = spec.sample_rate / (2 * alpha)
    freqs = np.arange(n_short // 2 + 1) * spec.bin_hz
    weights = _triangles(edges, freqs)
    weights[:, freqs > nyquist] = 0.0
    centers = edges[1:-1].copy()
    active = int(np.count_nonzero(centers < nyquist))
    weights[active:] = 0.0
    _warn_empty(weights[:active], "modified mel filter bank")
    return MelFilterBank(weights, centers, edges, active,
                         spec.sample_rate // alpha, spec.bin_hz)
