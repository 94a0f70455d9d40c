"""Pipeline configuration and its flat ``key = value`` file format."""
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from .dsp import WINDOW_KINDS

HOP_MODES = ("half", "paper-literal")


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field."""


@dataclass(frozen=True)
class PipelineConfig:
    n_filters: int = 30
    f_min: float = 130.0
    f_max: float = 6800.0
    frame_ms: float = 32.0
    hop_fraction: float = 0.5
    hop_mode: str = "half"
    window: str = "standard"
    log_floor: float = 1e-10
    alpha: int = 2
    fill_decay: float = 0.95

    def __post_init__(self):
        if self.n_filters < 1:
            raise ConfigError("n_filters: must be >= 1")
        if not 0 <= self.f_min < self.f_max:
            raise ConfigError("f_min/f_max: need 0 <= f_min < f_max")
        if self.frame_ms <= 0:
            raise ConfigError("frame_ms: must be positive")
        if not 0 < self.hop_fraction <= 1:
            raise ConfigError("hop_fraction: must be in (0, 1]")
        if self.hop_mode not in HOP_MODES:
            raise ConfigError(f"hop_mode: expected one of {HOP_MODES}, got {self.hop_mode!r}")
        if self.window not in WINDOW_KINDS:
            raise ConfigError(f"window: expected one of {WINDOW_KINDS}, got {self.window!r}")
        if not self.log_floor > 0:
            raise ConfigError("log_floor: must be > 0")
        if isinstance(self.alpha, bool) or int(self.alpha) != self.alpha or self.alpha < 1:
            raise ConfigError(f"alpha: must be an integer >= 1, got {self.alpha!r}")
        if not 0 < self.fill_decay <= 1:
            raise ConfigError("fill_decay: must be in (0, 1]")
        object.__setattr__(self, "alpha", int(self.alpha))
        object.__setattr__(self, "n_filters", int(self.n_filters))

    def frame_length(self, sample_rate):
        """Samples per frame at `sample_rate`; must come out integral."""
        n = self.frame_ms * sample_rate / 1000.0
        if abs(n - round(n)) > 1e-9:
            raise ConfigError(f"frame_ms: {self.frame_ms} ms is not a whole number of samples at {sample_rate} Hz")
        return int(round(n))

    def hop_length(self, frame_len):
        hop = int(round(frame_len * self.hop_fraction))
        if self.hop_mode == "paper-literal":
            hop -= 1
        if hop < 1:
            raise ConfigError(f"hop_fraction: hop of {hop} samples for frame length {frame_len}")
        return hop

    def full_rate_frame(self, sample_rate):
        """Frame length at the full rate, checked to be even and divisible by alpha."""
        n = self.frame_length(sample_rate)
        if n % 2 or n % self.alpha:
            raise ConfigError(f"frame_ms: frame of {n} samples must be even and divisible by alpha={self.alpha}")
        return n

    def with_overrides(self, **overrides):
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def to_dict(self):
        return asdict(self)


_TYPES = {f.name: f.type for f in fields(PipelineConfig)}
_CASTS = {"int": int, "float": float, "str": str, int: int, float: float, str: str}


def parse_config_text(text, base=None):
    """Parse ``key = value`` lines (``#`` comments allowed) onto `base`."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _TYPES:
            raise ConfigError(f"{key}: unknown configuration field (line {lineno})")
        try:
            values[key] = _CASTS[_TYPES[key]](value)
        except ValueError as exc:
            raise ConfigError(f"{key}: cannot parse {value!r} (line {lineno})") from exc
    return replace(base or PipelineConfig(), **values)


def load_config(path=None, **overrides):
    cfg = PipelineConfig()
    if path is not None:
        cfg = parse_config_text(Path(path).read_text(), cfg)
    return cfg.with_overrides(**overrides)


def format_config(cfg):
    return "".join(f"{k} = {v}\n" for k, v in cfg.to_dict().items())
