"""Reading PCM audio and writing feature matrices.

WAV parsing is done by hand so that each failure mode gets its own exception;
headerless ``.raw`` and NIST SPHERE ``.sph`` files (the formats AN4 ships in)
are accepted by :func:`read_audio` as well.
"""
import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

WAVE_FORMAT_PCM = 0x0001
WAVE_FORMAT_IEEE_FLOAT = 0x0003
WAVE_FORMAT_EXTENSIBLE = 0xFFFE


class AudioFormatError(ValueError):
    """Base class for unreadable audio files."""


class MalformedHeaderError(AudioFormatError):
    pass


class UnsupportedEncodingError(AudioFormatError):
    pass


class EmptyDataError(AudioFormatError):
    pass


@dataclass(frozen=True, eq=False)
class AudioSignal:
    """Mono waveform with amplitudes in [-1, 1]."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        samples = np.ascontiguousarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise ValueError("samples must be one-dimensional")
        if int(self.sample_rate) != self.sample_rate or self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be a positive integer, got {self.sample_rate}")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples must be finite")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "sample_rate", int(self.sample_rate))

    def __len__(self):
        return self.samples.shape[0]

    @property
    def duration(self):
        return len(self) / self.sample_rate


def _decode_pcm(raw, bits, fmt_tag):
    if fmt_tag == WAVE_FORMAT_IEEE_FLOAT:
        if bits == 32:
            data = np.frombuffer(raw, dtype="<f4").astype(np.float64)
        elif bits == 64:
            data = np.frombuffer(raw, dtype="<f8").copy()
        else:
            raise UnsupportedEncodingError(f"{bits}-bit float samples are not supported")
        return np.clip(data, -1.0, 1.0)
    if bits == 8:
        return (np.frombuffer(raw, dtype=np.uint8).astype(np.float64) - 128.0) / 128.0
    if bits == 16:
        return np.frombuffer(raw, dtype="<i2") / 32768.0
    if bits == 24:
        b = np.frombuffer(raw, dtype=np.uint8).reshape(-1, 3).astype(np.int32)
        val = b[:, 0] | (b[:, 1] << 8) | (b[:, 2] << 16)
        val = np.where(val >= 1 << 23, val - (1 << 24), val)
        return val / float(1 << 23)
    if bits == 32:
        return np.frombuffer(raw, dtype="<i4") / float(1 << 31)
    raise UnsupportedEncodingError(f"{bits}-bit integer PCM is not supported")


def read_wav(path):
    """Read a RIFF/WAVE PCM file into a mono :class:`AudioSignal`.

    Integer encodings (8/16/24/32 bit) are divided by their full-scale value
    ``2**(bits-1)``; 8-bit data is unsigned with offset 128. Multi-channel
    files keep channel 0 only.

    Raises
    ------
    FileNotFoundError
        `path` does not exist.
    EmptyDataError
        The file or its data chunk holds no samples.
    UnsupportedEncodingError
        Compressed or otherwise non-PCM sample encodings.
    MalformedHeaderError
        Broken RIFF structure or missing chunks.
    """
    path = Path(path)
    blob = path.read_bytes()
    if len(blob) == 0:
        raise EmptyDataError(f"{path}: empty data chunk (file is 0 bytes)")
    if len(blob) < 12 or blob[:4] not in (b"RIFF", b"RIFX") or blob[8:12] != b"WAVE":
        raise MalformedHeaderError(f"{path}: not a RIFF/WAVE file")
    if blob[:4] == b"RIFX":
        raise UnsupportedEncodingError(f"{path}: big-endian RIFX files are not supported")

    fmt = None
    data = None
    pos = 12
    while pos + 8 <= len(blob):
        chunk_id = blob[pos:pos + 4]
        (size,) = struct.unpack("<I", blob[pos + 4:pos + 8])
        body = blob[pos + 8:pos + 8 + size]
        if chunk_id == b"fmt ":
            if size < 16 or len(body) < 16:
                raise MalformedHeaderError(f"{path}: fmt chunk too short")
            fmt = struct.unpack("<HHIIHH", body[:16])
            if fmt[0] == WAVE_FORMAT_EXTENSIBLE:
                if len(body) < 26:
                    raise MalformedHeaderError(f"{path}: truncated WAVE_FORMAT_EXTENSIBLE header")
                (sub,) = struct.unpack("<H", body[24:26])
                fmt = (sub,) + fmt[1:]
        elif chunk_id == b"data":
            if fmt is None:
                raise MalformedHeaderError(f"{path}: data chunk precedes fmt chunk")
            data = body
            break
        pos += 8 + size + (size & 1)

    if fmt is None:
        raise MalformedHeaderError(f"{path}: missing fmt chunk")
    if data is None:
        raise MalformedHeaderError(f"{path}: missing data chunk")
    fmt_tag, channels, rate, _, block_align, bits = fmt
    if fmt_tag not in (WAVE_FORMAT_PCM, WAVE_FORMAT_IEEE_FLOAT):
        raise UnsupportedEncodingError(f"{path}: compressed format tag 0x{fmt_tag:04x}")
    if channels < 1 or rate < 1 or bits < 8 or bits % 8:
        raise MalformedHeaderError(f"{path}: invalid fmt fields (channels={channels}, rate={rate}, bits={bits})")
    width = bits // 8
    if block_align != channels * width:
        raise MalformedHeaderError(f"{path}: block_align {block_align} != channels*width {channels * width}")
    n_frames = len(data) // block_align
    if n_frames == 0:
        raise EmptyDataError(f"{path}: empty data chunk")
    data = data[:n_frames * block_align]
    if channels > 1:
        frames = np.frombuffer(data, dtype=np.uint8).reshape(n_frames, block_align)
        data = frames[:, :width].tobytes()
    return AudioSignal(_decode_pcm(data, bits, fmt_tag), rate)


def read_raw(path, sample_rate=16000, byteorder="big"):
    """Read headerless 16-bit signed PCM (AN4 ``.raw`` files are big-endian)."""
    path = Path(path)
    blob = path.read_bytes()
    if len(blob) < 2:
        raise EmptyDataError(f"{path}: empty data chunk")
    dtype = ">i2" if byteorder == "big" else "<i2"
    return AudioSignal(np.frombuffer(blob[: len(blob) // 2 * 2], dtype=dtype) / 32768.0, sample_rate)


def read_sphere(path):
    """Read an uncompressed NIST SPHERE file (16-bit PCM)."""
    path = Path(path)
    blob = path.read_bytes()
    if len(blob) == 0:
        raise EmptyDataError(f"{path}: empty data chunk (file is 0 bytes)")
    if not blob.startswith(b"NIST_1A"):
        raise MalformedHeaderError(f"{path}: missing NIST_1A magic")
    try:
        header_len = int(blob[8:16].strip())
        lines = blob[16:header_len].decode("ascii", "replace").splitlines()
    except ValueError as exc:
        raise MalformedHeaderError(f"{path}: bad SPHERE header length") from exc
    fields = {}
    for line in lines:
        parts = line.split(None, 2)
        if len(parts) == 3:
            fields[parts[0]] = parts[2]
        if line.strip() == "end_head":
            break
    coding = fields.get("sample_coding", "pcm")
    if coding != "pcm":
        raise UnsupportedEncodingError(f"{path}: sample_coding {coding!r}")
    rate = int(fields.get("sample_rate", 16000))
    width = int(fields.get("sample_n_bytes", 2))
    channels = int(fields.get("channel_count", 1))
    if width != 2:
        raise UnsupportedEncodingError(f"{path}: {width}-byte SPHERE samples")
    order = ">i2" if fields.get("sample_byte_format", "01") == "10" else "<i2"
    body = blob[header_len:]
    n = len(body) // (2 * channels)
    if n == 0:
        raise EmptyDataError(f"{path}: empty data chunk")
    data = np.frombuffer(body[: n * 2 * channels], dtype=order).reshape(n, channels)[:, 0]
    return AudioSignal(data / 32768.0, rate)


def read_audio(path, raw_rate=16000, raw_byteorder="big"):
    """Dispatch on suffix: ``.raw`` and ``.sph`` files, WAV otherwise."""
    suffix = Path(path).suffix.lower()
    if suffix == ".raw":
        return read_raw(path, raw_rate, raw_byteorder)
    if suffix == ".sph":
        return read_sphere(path)
    return read_wav(path)


def write_wav(path, signal, bits=16):
    """Write a mono integer-PCM WAV file (used for fixtures and demos)."""
    if bits != 16:
        raise UnsupportedEncodingError("only 16-bit output is supported")
    codes = np.clip(np.round(np.asarray(signal.samples) * 32768.0), -32768, 32767).astype("<i2")
    payload = codes.tobytes()
    header = struct.pack(
        "<4sI4s4sIHHIIHH4sI",
        b"RIFF", 36 + len(payload), b"WAVE",
        b"fmt ", 16, WAVE_FORMAT_PCM, 1, signal.sample_rate,
        signal.sample_rate * 2, 2, 16,
        b"data", len(payload),
    )
    Path(path).write_bytes(header + payload)


def _format_value(value):
    return repr(float(value))


def write_matrix(matrix, path, format=None):
    """Serialize a 2-D real matrix as CSV (one row per line) or JSON.

    Values are written with ``repr`` so they read back exactly. `format`
    defaults to the file extension.
    """
    mat = np.asarray(matrix, dtype=np.float64)
    if mat.ndim == 1:
        mat = mat[None, :]
    if mat.ndim != 2 or mat.size == 0:
        raise ValueError("matrix must be a non-empty 2-D array")
    path = Path(path)
    if format is None:
        format = "json" if path.suffix.lower() == ".json" else "csv"
    if format == "csv":
        text = "".join(",".join(_format_value(v) for v in row) + "\n" for row in mat)
    elif format == "json":
        text = json.dumps([[float(v) for v in row] for row in mat]) + "\n"
    else:
        raise ValueError(f"unknown matrix format {format!r}")
    path.write_text(text)


def read_matrix(path, format=None):
    """Inverse of :func:`write_matrix`."""
    path = Path(path)
    if format is None:
        format = "json" if path.suffix.lower() == ".json" else "csv"
    if format == "json":
        return np.array(json.loads(path.read_text()), dtype=np.float64)
    rows = [line.split(",") for line in path.read_text().splitlines() if line.strip()]
    return np.array(rows, dtype=np.float64)
