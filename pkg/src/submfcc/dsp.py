"""Framing, Hamming windows and one-sided magnitude spectra."""
from dataclasses import dataclass, field

import numpy as np

from . import kernels

WINDOW_KINDS = ("standard", "paper-literal")


@dataclass(frozen=True)
class FrameMatrix:
    """Overlapping frames stored column-wise (N x P)."""

    frames: np.ndarray
    frame_len: int
    hop: int
    source: np.ndarray = field(default=None, repr=False)

    @property
    def n_frames(self):
        return self.frames.shape[1]


@dataclass(frozen=True)
class MagnitudeSpectrogram:
    """One-sided magnitudes, K = N/2 + 1 bins by P frames."""

    mags: np.ndarray
    bin_hz: float

    @property
    def n_bins(self):
        return self.mags.shape[0]

    @property
    def frequencies(self):
        return np.arange(self.n_bins) * self.bin_hz


def n_frames_for(length, frame_len, hop):
    if length < frame_len:
        return 0
    return (length - frame_len) // hop + 1


def frame_signal(signal, frame_len, hop):
    """Split ``signal`` into full frames of `frame_len` starting every `hop` samples.

    Trailing samples that do not complete a frame are dropped.
    """
    frame_len = int(frame_len)
    hop = int(hop)
    if frame_len < 1:
        raise ValueError("frame_len must be positive")
    if not 1 <= hop <= frame_len:
        raise ValueError(f"hop must be in [1, frame_len], got {hop}")
    x = np.asarray(signal.samples if hasattr(signal, "samples") else signal, dtype=np.float64)
    n = n_frames_for(x.shape[0], frame_len, hop)
    if n == 0:
        raise ValueError(f"signal of {x.shape[0]} samples is shorter than one frame ({frame_len})")
    x = np.ascontiguousarray(x)
    view = np.lib.stride_tricks.sliding_window_view(x, frame_len)[::hop][:n]
    return FrameMatrix(view.T, frame_len, hop, x)


def hamming_window(n, kind="standard"):
    """Hamming window of length `n`.

    ``"standard"`` is the symmetric ``0.54 - 0.46 cos(2 pi n / (N - 1))``.
    ``"paper-literal"`` evaluates ``0.54 - 0.46 cos(pi n / N)``, a half-period
    taper that rises monotonically; kept for fidelity experiments.
    """
    if n < 2:
        raise ValueError(f"window length must be >= 2, got {n}")
    k = np.arange(n, dtype=np.float64)
    if kind == "standard":
        return 0.54 - 0.46 * np.cos(2.0 * np.pi * k / (n - 1))
    if kind == "paper-literal":
        return 0.54 - 0.46 * np.cos(np.pi * k / n)
    raise ValueError(f"unknown window kind {kind!r}; expected one of {WINDOW_KINDS}")


def magnitude_spectrum(frames, window, sample_rate=None, backend=None):
    """``|DFT_N(x_p * w)|`` for bins ``0..N/2`` of every frame."""
    window = np.ascontiguousarray(window, dtype=np.float64)
    if window.shape != (frames.frame_len,):
        raise ValueError(f"window length {window.shape[0]} != frame length {frames.frame_len}")
    k = kernels.active if backend is None else kernels.select(backend)
    if frames.source is not None:
        windowed = k.window_frames(frames.source, frames.frame_len, frames.hop, frames.n_frames, window)
    else:
        windowed = np.asarray(frames.frames, dtype=np.float64).T * window[None, :]
    # frame-major so each transform runs over contiguous memory
    mags_t = np.abs(np.fft.rfft(windowed, axis=1))
    bin_hz = sample_rate / frames.frame_len if sample_rate else 1.0 / frames.frame_len
    return MagnitudeSpectrogram(mags_t.T, bin_hz)
