import numpy as np
import pytest

from submfcc import kernels
from submfcc.audio import AudioSignal

BACKENDS = ["python"] + (["cython"] if kernels.cython is not None else [])

ACCEPTANCE_LINES = []


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240518)


def tone_mixture(freqs, amps, sample_rate=16000, seconds=1.0, noise_db=-40.0, seed=0):
    """Sum of sinusoids plus white noise `noise_db` below the mixture RMS."""
    rng = np.random.default_rng(seed)
    t = np.arange(int(sample_rate * seconds)) / sample_rate
    x = np.zeros_like(t)
    for f, a in zip(freqs, amps):
        x += a * np.sin(2 * np.pi * f * t + rng.uniform(0, 2 * np.pi))
    rms = np.sqrt(np.mean(x ** 2))
    x += rms * 10 ** (noise_db / 20) * rng.standard_normal(t.shape[0])
    return AudioSignal(x / (1.05 * np.abs(x).max()), sample_rate)


@pytest.fixture
def speechlike():
    """Band-limited harmonic signal with a slowly moving pitch and envelope."""
    sr = 16000
    t = np.arange(sr) / sr
    f0 = 120 + 30 * np.sin(2 * np.pi * 1.5 * t)
    phase = 2 * np.pi * np.cumsum(f0) / sr
    env = 0.5 + 0.5 * np.sin(2 * np.pi * 3 * t) ** 2
    x = sum(np.sin(h * phase) / h for h in range(1, 25) if h * 150 < 3500)
    x = env * x + 1e-3 * np.random.default_rng(1).standard_normal(sr)
    return AudioSignal(x / (1.05 * np.abs(x).max()), sr)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
