import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from submfcc.audio import AudioSignal
from submfcc.cepstrum import (
    dct_mfcc,
    fill_inactive_bands,
    log_mel_energies,
    mfcc_analysis,
    mfcc_pipeline,
    mfcc_subsampled_pipeline,
)
from submfcc.config import ConfigError, PipelineConfig
from submfcc.melbank import MelBankSpec, MelFilterBank, build_filterbank
from submfcc.resample import decimate

DEFAULT = PipelineConfig()


def brute_dct(L):
    F, P = L.shape
    out = np.zeros((F, P))
    for p in range(P):
        for r in range(1, F + 1):
            out[r - 1, p] = sum(L[m - 1, p] * math.cos(r * (2 * m - 1) * math.pi / (2 * F))
                                for m in range(1, F + 1))
    return out


def one_hot_bank(n_bins, k0):
    w = np.zeros((1, n_bins))
    w[0, k0] = 1.0
    return MelFilterBank(w, np.array([1.0]), np.array([0.0, 1.0, 2.0]), 1, 16000, 1.0)


def test_log_mel_silence(backend):
    bank = build_filterbank(MelBankSpec(30, 130, 6800, 16000, 512))
    out = log_mel_energies(bank, np.zeros((257, 4)), 1e-10, backend)
    np.testing.assert_array_equal(out, np.log(1e-10))


def test_log_mel_one_hot(backend):
    mags = np.zeros((9, 1))
    mags[3, 0] = math.e
    assert log_mel_energies(one_hot_bank(9, 3), mags, 1e-10, backend)[0, 0] == pytest.approx(1.0, abs=1e-15)


def test_log_mel_brute_force(backend, rng):
    bank = build_filterbank(MelBankSpec(30, 130, 6800, 16000, 512))
    mags = rng.uniform(0, 3, (257, 7))
    fast = log_mel_energies(bank, mags, 1e-10, backend)
    for m in range(30):
        for p in range(7):
            s = 0.0
            for k in range(257):
                s += bank.weights[m, k] * mags[k, p]
            assert fast[m, p] == pytest.approx(math.log(max(s, 1e-10)), abs=1e-12)


def test_log_mel_dimension_mismatch():
    bank = build_filterbank(MelBankSpec(30, 130, 6800, 16000, 512))
    with pytest.raises(ValueError):
        log_mel_energies(bank, np.ones((256, 2)))


def test_fill_examples(backend):
    L = np.arange(12, dtype=float).reshape(4, 3)
    np.testing.assert_array_equal(fill_inactive_bands(L, 4, 0.95, backend), L)

    L = np.zeros((5, 2))
    L[2] = 1.0
    out = fill_inactive_bands(L, 3, 0.95, backend)
    np.testing.assert_allclose(out[3], 0.95, rtol=1e-15)
    np.testing.assert_allclose(out[4], 0.9025, rtol=1e-15)
    np.testing.assert_array_equal(out[:3], L[:3])

    L = np.full((3, 1), -3.0)
    assert fill_inactive_bands(L, 1, 0.95, backend)[1, 0] == pytest.approx(-2.85, rel=1e-15)


def test_fill_range():
    with pytest.raises(ValueError):
        fill_inactive_bands(np.zeros((4, 2)), 0)
    with pytest.raises(ValueError):
        fill_inactive_bands(np.zeros((4, 2)), 5)


@pytest.mark.parametrize("F", [1, 2, 13, 30])
def test_dct_constant(backend, F):
    out = dct_mfcc(np.full((F, 3), -7.3), backend)
    assert np.max(np.abs(out)) < 1e-9


def test_dct_single_filter(backend):
    assert abs(dct_mfcc(np.array([[5.0]]), backend)[0, 0]) < 1e-15


@pytest.mark.parametrize("r0", [1, 5, 17, 29])
def test_dct_cosine_basis(backend, r0):
    F = 30
    m = np.arange(1, F + 1)
    L = np.cos(r0 * (2 * m - 1) * np.pi / (2 * F))[:, None]
    out = dct_mfcc(L, backend)[:, 0]
    oracle = brute_dct(L)[:, 0]
    np.testing.assert_allclose(out, oracle, atol=1e-12)
    assert out[r0 - 1] == pytest.approx(F / 2, abs=1e-9)
    others = np.delete(np.arange(F - 1), r0 - 1)
    assert np.max(np.abs(out[others])) < 1e-9


def test_dct_matches_brute(backend, rng):
    L = rng.normal(size=(30, 6))
    np.testing.assert_allclose(dct_mfcc(L, backend), brute_dct(L), atol=1e-11)


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, (12, 4), elements=st.floats(-50, 50)),
       arrays(np.float64, (12, 4), elements=st.floats(-50, 50)),
       st.floats(-5, 5), st.floats(-5, 5), st.floats(-100, 100))
def test_dct_linearity_and_constant(L1, L2, a, b, c):
    lhs = dct_mfcc(a * L1 + b * L2)
    rhs = a * dct_mfcc(L1) + b * dct_mfcc(L2)
    np.testing.assert_allclose(lhs, rhs, atol=1e-9)
    np.testing.assert_allclose(dct_mfcc(L1 + c), dct_mfcc(L1), atol=1e-9)


def test_pipeline_silence():
    out = mfcc_pipeline(AudioSignal(np.zeros(16000), 16000), DEFAULT)
    assert out.shape == (30, 61)
    assert np.max(np.abs(out)) < 1e-9


def test_pipeline_shape(speechlike):
    out = mfcc_pipeline(speechlike, DEFAULT)
    assert out.shape == (30, 61)
    assert np.all(np.isfinite(out))


def test_pipeline_too_short():
    with pytest.raises(ValueError):
        mfcc_pipeline(AudioSignal(np.zeros(100), 16000), DEFAULT)


def test_subsampled_alpha_one_identical(speechlike):
    cfg = PipelineConfig(alpha=1)
    np.testing.assert_array_equal(mfcc_subsampled_pipeline(speechlike, cfg), mfcc_pipeline(speechlike, cfg))


def test_subsampled_fill_structure(speechlike):
    y = decimate(speechlike, 2)
    logmel, coeffs, bank = mfcc_analysis(y, DEFAULT, subsampled=True)
    assert bank.active_count == 24
    assert coeffs.shape == (30, 61)
    for m in range(25, 31):
        np.testing.assert_allclose(logmel[m - 1], 0.95 ** (m - 24) * logmel[23], rtol=1e-13)


def test_subsampled_silence_matches_brute_force():
    y = AudioSignal(np.zeros(8000), 8000)
    coeffs = mfcc_subsampled_pipeline(y, DEFAULT)
    col = np.full(30, math.log(1e-10))
    col[24:] = [0.95 ** k * col[23] for k in range(1, 7)]
    np.testing.assert_allclose(coeffs, brute_dct(np.tile(col[:, None], (1, coeffs.shape[1]))), atol=1e-9)


def test_frame_counts_agree(speechlike):
    a = mfcc_pipeline(speechlike, DEFAULT)
    b = mfcc_subsampled_pipeline(decimate(speechlike, 2), DEFAULT)
    assert a.shape == b.shape


def test_config_frame_checks():
    with pytest.raises(ConfigError, match="frame_ms"):
        mfcc_subsampled_pipeline(AudioSignal(np.zeros(8000), 8000), PipelineConfig(frame_ms=32.0625, alpha=2))
    with pytest.raises(ConfigError, match="frame_ms"):
        mfcc_pipeline(AudioSignal(np.zeros(16000), 16000), PipelineConfig(frame_ms=0.01))


def test_gain_invariance_original(speechlike):
    base = mfcc_pipeline(speechlike, DEFAULT)
    scaled = AudioSignal(speechlike.samples * 0.3, speechlike.sample_rate)
    np.testing.assert_allclose(mfcc_pipeline(scaled, DEFAULT), base, atol=1e-9)


def test_gain_changes_filled_bands(speechlike):
    # Fill-in multiplies log values, so a gain offset is not constant across
    # the filled bands and the subsampled MFCCs do depend on gain.
    y = decimate(speechlike, 2)
    a = mfcc_subsampled_pipeline(y, DEFAULT)
    b = mfcc_subsampled_pipeline(AudioSignal(y.samples * 0.3, 8000), DEFAULT)
    assert np.max(np.abs(a - b)) > 1e-3


def test_deterministic(speechlike):
    a = mfcc_subsampled_pipeline(decimate(speechlike, 2), DEFAULT)
    b = mfcc_subsampled_pipeline(decimate(speechlike, 2), DEFAULT)
    assert a.tobytes() == b.tobytes()


@pytest.mark.parametrize("window", ["standard", "paper-literal"])
@pytest.mark.parametrize("hop_mode", ["half", "paper-literal"])
def test_modes_run(speechlike, window, hop_mode):
    cfg = PipelineConfig(window=window, hop_mode=hop_mode)
    a = mfcc_pipeline(speechlike, cfg)
    b = mfcc_subsampled_pipeline(decimate(speechlike, 2), cfg)
    assert a.shape[0] == b.shape[0] == 30
    assert np.all(np.isfinite(a)) and np.all(np.isfinite(b))
