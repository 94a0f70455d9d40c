"""MFCCs of full-rate and integer-subsampled speech.

The subsampled path uses a modified Mel filter bank (original centers kept,
bands above the reduced Nyquist dropped and filled in geometrically) so that
its features line up with those of the original-rate speech.
"""
from .audio import AudioSignal, read_audio, read_matrix, read_wav, write_matrix, write_wav
from .cepstrum import (
    dct_mfcc,
    fill_inactive_bands,
    log_mel_energies,
    mfcc_analysis,
    mfcc_pipeline,
    mfcc_subsampled_pipeline,
)
from .config import ConfigError, PipelineConfig, load_config
from .dsp import frame_signal, hamming_window, magnitude_spectrum
from .evaluate import compare_case1, compare_case2, corpus_report, corpus_reports, pearson
from .kernels import BACKEND
from .melbank import (
    MelBankSpec,
    build_filterbank,
    build_modified_filterbank,
    center_frequencies,
    hz_to_mel,
    mel_to_hz,
)
from .resample import aliased_spectrum, decimate

__version__ = "0.1.0"
