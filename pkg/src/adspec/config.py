"""Run configuration: flat ``key = value`` text files with ``#`` comments.

Precedence when building a config: defaults < file < ``ADSPEC_<KEY>``
environment variables < explicit command-line overrides.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError
from .hamiltonian import DENSE_MAX_N
from .sat import MAX_ENUMERATION_N
from .spectral import BIN_WIDTH, CORE_FRACTION, LOW_FRACTION, LOW_START, S_MAX

COMMANDS = ("generate", "spectrum", "stats", "entangle", "gaps", "flow")
WINDOWS = ("core", "low")
ENV_PREFIX = "ADSPEC_"


def _ints(text):
    return tuple(int(x) for x in text.split(",") if x.strip())


def _floats(text):
    return tuple(float(x) for x in text.split(",") if x.strip())


def _words(text):
    return tuple(x.strip() for x in text.split(",") if x.strip())


def _tgrid(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError("expected start:stop:count")
    return (float(parts[0]), float(parts[1]), int(parts[2]))


def _join(values):
    return ",".join(repr(v) if isinstance(v, float) else str(v) for v in values)


@dataclass(frozen=True)
class RunConfig:
    command: str = "gaps"
    n: tuple[int, ...] = (10,)
    alpha: float = 3.0
    count: int = 1
    seed: int = 0
    max_tries: int = 10_000
    instance: str = ""  # optional .cnf path used instead of generating from `seed`
    t_grid: tuple[float, float, int] = (0.0, 1.0, 51)
    t: float = 0.5
    windows: tuple[str, ...] = WINDOWS
    core_fraction: float = CORE_FRACTION
    low_start: int = LOW_START
    low_fraction: float = LOW_FRACTION
    bin_width: float = BIN_WIDTH
    s_max: float = S_MAX
    grid_step: float = 0.02
    tol: float = 1e-6
    levels: tuple[float, ...] = (1e-1, 1e-2, 1e-3, 1e-4)
    out: str = "out"
    jobs: int = 0  # 0 means all available cores

    # parsing/formatting per non-scalar field
    _codecs = {
        "n": (_ints, _join),
        "t_grid": (_tgrid, lambda g: f"{g[0]!r}:{g[1]!r}:{g[2]}"),
        "windows": (_words, _join),
        "levels": (_floats, _join),
    }

    def t_values(self):
        import numpy as np

        start, stop, count = self.t_grid
        return np.linspace(start, stop, count)

    @property
    def workers(self) -> int:
        return self.jobs if self.jobs > 0 else (os.cpu_count() or 1)

    def replace(self, **changes) -> "RunConfig":
        cfg = dataclasses.replace(self, **changes)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        def need(cond, key, msg):
            if not cond:
                raise ConfigError(msg, key)

        need(self.command in COMMANDS, "command", f"must be one of {COMMANDS}")
        need(len(self.n) >= 1, "n", "at least one value required")
        need(all(3 <= k <= MAX_ENUMERATION_N for k in self.n), "n",
             f"each n must lie in [3, {MAX_ENUMERATION_N}]")
        if self.command in ("spectrum", "stats", "entangle", "flow"):
            need(len(self.n) == 1, "n", f"{self.command} takes a single n")
            need(self.n[0] <= DENSE_MAX_N, "n", f"full diagonalization needs n <= {DENSE_MAX_N}")
        if self.command in ("entangle",):
            need(self.n[0] % 2 == 0, "n", "half-chain entropy needs even n")
        need(self.alpha > 0 and round(self.alpha * min(self.n)) >= 1, "alpha",
             "alpha * n must round to at least one clause")
        need(self.count >= 1, "count", "must be >= 1")
        need(0 <= self.seed < 2**64, "seed", "must be an unsigned 64-bit integer")
        need(self.max_tries >= 1, "max_tries", "must be >= 1")
        start, stop, num = self.t_grid
        need(0.0 <= start <= stop <= 1.0 and num >= 1, "t_grid", "need 0 <= start <= stop <= 1, count >= 1")
        if self.command == "flow":
            need(start > 0.0, "t_grid", "flow times must lie in (0, 1]")
        need(0.0 <= self.t <= 1.0, "t", "must lie in [0, 1]")
        need(all(w in WINDOWS for w in self.windows) and self.windows, "windows",
             f"choose from {WINDOWS}")
        need(0.0 < self.core_fraction <= 1.0, "core_fraction", "must lie in (0, 1]")
        need(self.low_start >= 0, "low_start", "must be >= 0")
        need(0.0 < self.low_fraction <= 1.0, "low_fraction", "must lie in (0, 1]")
        need(self.bin_width > 0, "bin_width", "must be positive")
        need(self.s_max > 0, "s_max", "must be positive")
        need(0.0 < self.grid_step <= 0.05, "grid_step", "must lie in (0, 0.05]")
        need(0.0 < self.tol <= 1e-4, "tol", "must lie in (0, 1e-4]")
        need(all(lv >= 0 for lv in self.levels), "levels", "must be non-negative")
        need(self.jobs >= 0, "jobs", "must be >= 0")
        if self.command == "gaps":
            need(self.count >= 2, "count", "gap statistics need at least 2 instances")

    def to_text(self) -> str:
        lines = []
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            fmt = self._codecs.get(f.name, (None, None))[1]
            if fmt is not None:
                text = fmt(value)
            elif isinstance(value, float):
                text = repr(value)
            else:
                text = str(value)
            lines.append(f"{f.name} = {text}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse_value(cls, key: str, text: str):
        fields = {f.name: f for f in dataclasses.fields(cls)}
        if key not in fields:
            raise ConfigError("unknown key", key)
        text = text.strip()
        try:
            if key in cls._codecs:
                return cls._codecs[key][0](text)
            default = fields[key].default
            if isinstance(default, bool):
                return text.lower() in ("1", "true", "yes")
            return type(default)(text)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value {text!r} ({exc})", key) from None

    @classmethod
    def from_text(cls, text: str, **overrides) -> "RunConfig":
        values = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            values[key] = cls.parse_value(key, value)
        values.update(overrides)
        cfg = cls(**values)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path=None, env=None, **overrides) -> "RunConfig":
        """Read ``path`` (if given), apply environment then explicit overrides."""
        text = Path(path).read_text() if path is not None else ""
        overrides = {k: v for k, v in overrides.items() if v is not None}
        env = os.environ if env is None else env
        for key, value in env.items():
            if key.startswith(ENV_PREFIX):
                name = key[len(ENV_PREFIX):].lower()
                overrides.setdefault(name, cls.parse_value(name, value))
        return cls.from_text(text, **overrides)
