import numpy as np
import pytest

from submfcc.audio import AudioSignal
from submfcc.dsp import frame_signal, hamming_window, magnitude_spectrum


def direct_dft(x):
    n = x.shape[0]
    k = np.arange(n)
    return np.array([np.sum(x * np.exp(-2j * np.pi * kk * k / n)) for kk in k])


def sig(n, sr=16000):
    return AudioSignal(np.arange(n, dtype=float) / n, sr)


@pytest.mark.parametrize("length,expected", [(512, 1), (768, 2), (16000, 61)])
def test_frame_counts(length, expected):
    assert frame_signal(sig(length), 512, 256).n_frames == expected


def test_too_short():
    with pytest.raises(ValueError):
        frame_signal(sig(511), 512, 256)


def test_bad_hop():
    with pytest.raises(ValueError):
        frame_signal(sig(1024), 512, 0)
    with pytest.raises(ValueError):
        frame_signal(sig(1024), 512, 513)


def test_frame_alignment(rng):
    x = AudioSignal(rng.uniform(-1, 1, 3001), 8000)
    fm = frame_signal(x, 200, 77)
    for p in range(fm.n_frames):
        for i in (0, 1, 99, 199):
            assert fm.frames[i, p] == x.samples[p * 77 + i]


def test_standard_window():
    for n in (2, 7, 256, 512):
        w = hamming_window(n)
        assert w[0] == pytest.approx(0.08, abs=1e-15)
        np.testing.assert_allclose(w, w[::-1], atol=1e-15)


def test_paper_literal_window():
    w = hamming_window(4, "paper-literal")
    expected = [0.54 - 0.46 * np.cos(n * np.pi / 4) for n in range(4)]
    np.testing.assert_allclose(w, expected, rtol=0, atol=1e-15)
    np.testing.assert_allclose(w, [0.08, 0.2147309, 0.54, 0.8652691], atol=1e-7)
    assert np.all(np.diff(w) > 0)


def test_window_errors():
    with pytest.raises(ValueError):
        hamming_window(1)
    with pytest.raises(ValueError):
        hamming_window(8, "hann")


def test_zero_frame():
    fm = frame_signal(AudioSignal(np.zeros(64), 8000), 64, 32)
    assert np.all(magnitude_spectrum(fm, hamming_window(64)).mags == 0)


def test_constant_frame_rectangular():
    fm = frame_signal(AudioSignal(np.ones(8), 8000), 8, 4)
    mags = magnitude_spectrum(fm, np.ones(8), 8000).mags[:, 0]
    assert mags.shape == (5,)
    assert mags[0] == pytest.approx(8.0)
    np.testing.assert_allclose(mags[1:], 0, atol=1e-12)


def test_impulse_gives_first_window_value():
    x = np.zeros(32)
    x[0] = 1.0
    fm = frame_signal(AudioSignal(x, 8000), 32, 16)
    np.testing.assert_allclose(magnitude_spectrum(fm, hamming_window(32)).mags[:, 0], 0.08, atol=1e-15)


def test_length_mismatch():
    fm = frame_signal(sig(64), 32, 16)
    with pytest.raises(ValueError):
        magnitude_spectrum(fm, np.ones(31))


def test_fft_matches_direct_sum(rng):
    n = 64
    w = hamming_window(n)
    worst = 0.0
    for _ in range(100):
        x = rng.standard_normal(n)
        fm = frame_signal(AudioSignal(np.clip(x / 5, -1, 1), 8000), n, n)
        fast = magnitude_spectrum(fm, w).mags[:, 0]
        slow = np.abs(direct_dft(fm.frames[:, 0] * w))[: n // 2 + 1]
        worst = max(worst, np.max(np.abs(fast - slow)) / np.max(slow))
    assert worst < 1e-9


def test_parseval(rng):
    n = 128
    x = rng.uniform(-1, 1, n) * hamming_window(n)
    full = np.fft.fft(x)
    assert np.sum(x ** 2) == pytest.approx(np.sum(np.abs(full) ** 2) / n, rel=1e-9)


def test_bin_frequencies():
    fm = frame_signal(sig(512), 512, 256)
    spec = magnitude_spectrum(fm, hamming_window(512), 16000)
    assert spec.bin_hz == 31.25
    assert spec.frequencies[-1] == 8000.0
