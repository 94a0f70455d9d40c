"""Integer-factor decimation and the DFT folding identity."""
import numpy as np

from . import kernels
from .audio import AudioSignal


def _check_alpha(alpha):
    if isinstance(alpha, bool) or int(alpha) != alpha or alpha < 1:
        raise ValueError(f"alpha must be an integer >= 1, got {alpha!r}")
    return int(alpha)


def _lowpass(samples, alpha, taps=101):
    # Windowed-sinc at the new Nyquist; comparison studies only.
    n = np.arange(taps) - (taps - 1) / 2
    h = np.sinc(n / alpha) / alpha * np.hamming(taps)
    return np.convolve(samples, h, mode="same")


def decimate(signal, alpha, lowpass=False):
    """Keep every `alpha`-th sample: ``y[s] = x[alpha * s]``.

    No anti-alias filter is applied unless ``lowpass=True``.
    """
    alpha = _check_alpha(alpha)
    if signal.sample_rate % alpha:
        raise ValueError(f"sample rate {signal.sample_rate} is not divisible by alpha={alpha}")
    x = signal.samples
    if lowpass and alpha > 1:
        x = _lowpass(x, alpha)
    return AudioSignal(x[::alpha], signal.sample_rate // alpha)


def aliased_spectrum(spectrum, alpha, backend=None):
    """Fold a length-N DFT onto N/alpha bins: ``Y(k) = mean_l X(k + l N/alpha)``.

    This is the DFT of the frame decimated by `alpha`, computed from the DFT
    of the full frame.
    """
    alpha = _check_alpha(alpha)
    x = np.ascontiguousarray(spectrum, dtype=np.complex128)
    if x.ndim != 1:
        raise ValueError("spectrum must be one-dimensional")
    if x.shape[0] % alpha:
        raise ValueError(f"alpha={alpha} does not divide spectrum length {x.shape[0]}")
    k = kernels.active if backend is None else kernels.select(backend)
    return k.fold_spectrum(x, alpha)
