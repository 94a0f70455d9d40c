"""Pearson comparison of original and subsampled-speech MFCCs.

Case I correlates the whole utterance (all frames concatenated); Case II
correlates frame by frame and averages.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels
from .audio import read_audio
from .cepstrum import mfcc_pipeline, mfcc_subsampled_pipeline
from .resample import decimate

CASES = ("I", "II")

# Vectors whose standard deviation is below this (relative to 1 + max|x|)
# are treated as constant; DCT rounding of a constant log spectrum is ~1e-14.
ZERO_VARIANCE_TOL = 1e-12


class DegenerateCorrelationError(ValueError):
    """Pearson r is undefined because a vector has zero variance."""


class AllFilesFailedError(RuntimeError):
    def __init__(self, message, reports):
        super().__init__(message)
        self.reports = reports


def _k(backend):
    return kernels.active if backend is None else kernels.select(backend)


def _is_constant(sxx, n, x_abs_max):
    return np.sqrt(np.maximum(sxx, 0.0) / n) <= ZERO_VARIANCE_TOL * (1.0 + x_abs_max)


def pearson(x, y, backend=None):
    """Pearson correlation of two equal-length vectors, clamped to [-1, 1]."""
    x = np.ascontiguousarray(x, dtype=np.float64).ravel()
    y = np.ascontiguousarray(y, dtype=np.float64).ravel()
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.shape[0]} vs {y.shape[0]}")
    if x.shape[0] < 2:
        raise ValueError("need at least two samples")
    sxx, syy, sxy = _k(backend).centered_moments(x, y)
    n = x.shape[0]
    if _is_constant(sxx, n, np.abs(x).max()) or _is_constant(syy, n, np.abs(y).max()):
        raise DegenerateCorrelationError("zero variance: correlation undefined")
    return float(min(1.0, max(-1.0, sxy / math.sqrt(sxx * syy))))


def _align(orig, sub):
    orig = np.asarray(orig, dtype=np.float64)
    sub = np.asarray(sub, dtype=np.float64)
    if orig.shape[0] != sub.shape[0]:
        raise ValueError(f"coefficient count mismatch: {orig.shape[0]} vs {sub.shape[0]}")
    n = min(orig.shape[1], sub.shape[1])
    return orig[:, :n], sub[:, :n]


def compare_case1(orig, sub, backend=None):
    """r between the frame-major concatenations of two F x P MFCC matrices."""
    orig, sub = _align(orig, sub)
    return pearson(orig.T.ravel(), sub.T.ravel(), backend)


@dataclass
class FrameCorrelations:
    r: np.ndarray                 # one value per usable frame
    frames: np.ndarray            # indices of those frames
    skipped: list = field(default_factory=list)

    @property
    def mean(self):
        return float(np.mean(self.r))

    @property
    def variance(self):
        return float(np.var(self.r))


def compare_case2(orig, sub, backend=None):
    """Per-frame r; frames where either MFCC vector is constant are skipped."""
    orig, sub = _align(orig, sub)
    a = np.ascontiguousarray(orig)
    b = np.ascontiguousarray(sub)
    sxx, syy, sxy = _k(backend).centered_moments_columns(a, b)
    n = a.shape[0]
    amax = np.abs(a).max(axis=0)
    bmax = np.abs(b).max(axis=0)
    if n < 2:
        raise ValueError("need at least two coefficients per frame")
    ok = ~(_is_constant(sxx, n, amax) | _is_constant(syy, n, bmax))
    if not ok.any():
        raise DegenerateCorrelationError("every frame has a constant MFCC vector")
    r = np.clip(sxy[ok] / np.sqrt(sxx[ok] * syy[ok]), -1.0, 1.0)
    return FrameCorrelations(r, np.flatnonzero(ok), [int(p) for p in np.flatnonzero(~ok)])


@dataclass
class CorrelationReport:
    case: str
    per_file: list                # [(file id, r)]
    skipped: list                 # [(file id, reason)]
    pooled: list = field(default_factory=list)   # Case II: every frame r of every file

    @property
    def values(self):
        return np.array([r for _, r in self.per_file], dtype=np.float64)

    @property
    def mean(self):
        return float(np.mean(self.values)) if self.per_file else None

    @property
    def variance(self):
        return float(np.var(self.values)) if self.per_file else None

    def to_dict(self):
        out = {
            "case": self.case,
            "n": len(self.per_file),
            "mean": self.mean,
            "variance": self.variance,
            "per_file": [{"id": fid, "r": float(r)} for fid, r in self.per_file],
            "skipped": [{"id": fid, "reason": reason} for fid, reason in self.skipped],
        }
        if self.case == "II":
            pooled = np.asarray(self.pooled, dtype=np.float64)
            out["pooled_mean"] = float(pooled.mean()) if pooled.size else None
            out["pooled_variance"] = float(pooled.var()) if pooled.size else None
            out["pooled_frames"] = int(pooled.size)
        return out


def _normalize_cases(cases):
    if isinstance(cases, str):
        cases = (cases,)
    out = []
    for c in cases:
        c = {"1": "I", "2": "II"}.get(str(c), str(c).upper())
        if c not in CASES:
            raise ValueError(f"unknown case {c!r}")
        out.append(c)
    return tuple(out)


def compare_signal(signal, cfg, cases=CASES, backend=None):
    """Run both pipelines on one full-rate signal and compare per case.

    Returns ``{case: result}`` where Case I maps to r and Case II to a
    :class:`FrameCorrelations`. The signal is decimated by ``cfg.alpha``.
    """
    cases = _normalize_cases(cases)
    orig = mfcc_pipeline(signal, cfg, backend)
    sub = mfcc_subsampled_pipeline(decimate(signal, cfg.alpha), cfg, backend)
    out = {}
    for case in cases:
        out[case] = compare_case1(orig, sub, backend) if case == "I" else compare_case2(orig, sub, backend)
    return out


def _evaluate_one(item, cfg, cases, backend, reader):
    fid, path = item
    try:
        signal = reader(path)
    except (OSError, ValueError) as exc:
        return fid, {c: f"{type(exc).__name__}: {exc}" for c in cases}
    try:
        orig = mfcc_pipeline(signal, cfg, backend)
        sub = mfcc_subsampled_pipeline(decimate(signal, cfg.alpha), cfg, backend)
    except ValueError as exc:
        return fid, {c: f"{type(exc).__name__}: {exc}" for c in cases}
    result = {}
    for case in cases:
        try:
            result[case] = compare_case1(orig, sub, backend) if case == "I" else compare_case2(orig, sub, backend)
        except ValueError as exc:
            result[case] = f"{type(exc).__name__}: {exc}"
    return fid, result


def corpus_reports(files, cfg, cases=CASES, jobs=1, backend=None, reader=read_audio, ids=None):
    """Evaluate every file and aggregate per case; results keep input order.

    Unreadable or degenerate files are listed under ``skipped``. Raises
    :class:`AllFilesFailedError` when no file produced a value for any case.
    """
    cases = _normalize_cases(cases)
    files = list(files)
    if not files:
        raise ValueError("no input files")
    ids = [str(f) for f in files] if ids is None else list(ids)
    items = list(zip(ids, files))

    def work(item):
        return _evaluate_one(item, cfg, cases, backend, reader)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(work, items))
    else:
        results = [work(item) for item in items]

    reports = {c: CorrelationReport(c, [], []) for c in cases}
    for fid, result in results:
        for case in cases:
            value = result[case]
            rep = reports[case]
            if isinstance(value, str):
                rep.skipped.append((fid, value))
            elif case == "I":
                rep.per_file.append((fid, float(value)))
            else:
                rep.per_file.append((fid, value.mean))
                rep.pooled.extend(float(v) for v in value.r)
    if all(not rep.per_file for rep in reports.values()):
        raise AllFilesFailedError(f"all {len(files)} files failed", reports)
    return reports


def corpus_report(files, cfg, case="I", jobs=1, backend=None, reader=read_audio):
    return corpus_reports(files, cfg, (case,), jobs, backend, reader)[_normalize_cases(case)[0]]


AUDIO_SUFFIXES = (".wav", ".sph", ".raw")


def collect_files(inputs):
    """Expand directories (recursively, sorted) and ``.txt``/``.lst`` list files."""
    out = []
    for item in inputs:
        p = Path(item)
        if p.is_dir():
            out.extend(sorted(q for q in p.rglob("*") if q.suffix.lower() in AUDIO_SUFFIXES))
        elif p.suffix.lower() in (".txt", ".lst"):
            base = p.parent
            for line in p.read_text().splitlines():
                line = line.strip()
                if line and not line.startswith("#"):
                    q = Path(line)
                    out.append(q if q.is_absolute() else base / q)
        else:
            out.append(p)
    return out
