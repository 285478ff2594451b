"""Run configuration: flat ``key = value`` files with command-line overrides."""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path

CONFIG_ENV = "SPINC_BERGMAN_CONFIG"


class ConfigError(ValueError):
    pass


def _floats(text: str) -> tuple[float, ...]:
    """Comma list of numbers; ``pi`` and multiples such as ``-2pi`` are accepted."""
    out = []
    for item in str(text).split(","):
        item = item.strip().replace(" ", "")
        if not item:
            continue
        if item.endswith("pi"):
            head = item[:-2].rstrip("*")
            mult = 1.0 if head in ("", "+") else -1.0 if head == "-" else float(head)
            out.append(mult * math.pi)
        else:
            out.append(float(item))
    return tuple(out)


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in str(text).split(",") if x.strip())


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


@dataclass(frozen=True)
class RunConfig:
    n: int = 1
    cutoff: int = 40
    a: tuple = ()
    flux: tuple = (1, 2, 3, 4, 5)
    grid: int = 64
    tol: float = 1e-6
    spectrum_tol: float = 1e-8
    oracle_tol: float = 1e-10
    rate_tol: float = 0.05
    jets: int = 20
    words: int = 200
    seed: int = 0
    flat: bool = False
    rules: str = ""
    json_out: str = ""
    csv_out: str = ""

    def __post_init__(self):
        for name in ("n", "cutoff", "grid", "jets", "words"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        for name in ("tol", "spectrum_tol", "oracle_tol", "rate_tol"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")
        if any(p < 1 for p in self.flux):
            raise ConfigError("flux values must be positive integers")
        if self.a:
            if len(self.a) != self.n:
                raise ConfigError(f"a has {len(self.a)} entries but n = {self.n}")
            if any(x == 0 for x in self.a):
                raise ConfigError("a_j must be nonzero")

    @property
    def model_a(self) -> tuple:
        return self.a or (2 * math.pi,) * self.n

    def echo(self) -> dict:
        """Config values in declaration order (output paths excluded)."""
        skip = {"json_out", "csv_out"}
        out = {}
        for f in fields(self):
            if f.name in skip:
                continue
            v = getattr(self, f.name)
            out[f.name] = list(v) if isinstance(v, tuple) else v
        out["a"] = list(self.model_a)
        return out


_PARSERS = {
    "n": int, "cutoff": int, "grid": int, "jets": int, "words": int, "seed": int,
    "tol": float, "spectrum_tol": float, "oracle_tol": float, "rate_tol": float,
    "a": _floats, "flux": _ints, "flat": _bool,
    "rules": str, "json_out": str, "csv_out": str,
}


def parse_config_text(text: str) -> dict:
    """Parse ``key = value`` lines (``#`` comments, blank lines ignored)."""
    out = {}
    for num, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"line {num}: expected key = value")
        key = key.strip().replace("-", "_")
        if key not in _PARSERS:
            raise ConfigError(f"line {num}: unknown key {key!r}")
        try:
            out[key] = _PARSERS[key](value.strip())
        except ValueError as exc:
            raise ConfigError(f"line {num}: bad value for {key}: {exc}") from None
    return out


def load_config(path: str | Path | None = None, overrides: dict | None = None) -> RunConfig:
    """Defaults, then the config file (argument or $SPINC_BERGMAN_CONFIG), then overrides."""
    values = {}
    path = path or os.environ.get(CONFIG_ENV)
    if path:
        values.update(parse_config_text(Path(path).read_text()))
    for key, v in (overrides or {}).items():
        if v is None:
            continue
        if key not in _PARSERS:
            raise ConfigError(f"unknown key {key!r}")
        values[key] = _PARSERS[key](v) if isinstance(v, str) else v
    if "a" in values and "n" not in values:
        values["n"] = len(values["a"])
    try:
        return RunConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def with_values(config: RunConfig, **kw) -> RunConfig:
    return replace(config, **kw)
