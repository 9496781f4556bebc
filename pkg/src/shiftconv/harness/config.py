"""Harness configuration: one ``key = value`` file, flag overrides on top."""
from __future__ import annotations

import hashlib
import json
import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

__all__ = ["ConfigError", "HarnessConfig", "load_config", "OUTPUT_ENV"]

OUTPUT_ENV = "SHIFTCONV_OUTPUT_DIR"


class ConfigError(ValueError):
    """Malformed or out-of-range configuration; the CLI maps it to a usage error."""


@dataclass(frozen=True)
class HarnessConfig:
    quad_tol: float = 1e-12  # relative tolerance handed to adaptive quadrature
    identity_tol: float = 1e-6  # exact identities (delta symbol, Poisson, delta-expanded)
    truncated_tol: float = 1e-4  # identities with a truncated dual side (Voronoi, post-Poisson)
    tail_tol: float = 1e-10  # measured dual tails
    C: float = 10.0  # truncation constant in C log^3
    workers: int = 1
    output_dir: str = "reports"
    seed: int = 20240601
    cache_dir: str = ""

    def __post_init__(self):
        for name in ("quad_tol", "identity_tol", "truncated_tol", "tail_tol"):
            v = getattr(self, name)
            if not v > 0:
                raise ConfigError(f"{name} must be > 0, got {v}")
        if not self.C > 0:
            raise ConfigError(f"C must be > 0, got {self.C}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")

    def digest(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def updated(self, **overrides) -> "HarnessConfig":
        live = {k: v for k, v in overrides.items() if v is not None}
        try:
            return replace(self, **_coerce(live))
        except TypeError as exc:
            raise ConfigError(str(exc)) from None


_TYPES = {f.name: f.type for f in fields(HarnessConfig)}
_CASTS = {"float": float, "int": int, "str": str}


def _coerce(items: dict) -> dict:
    out = {}
    for key, raw in items.items():
        if key not in _TYPES:
            raise ConfigError(f"unknown config key {key!r}")
        cast = _CASTS[_TYPES[key]]
        try:
            out[key] = cast(raw.strip()) if isinstance(raw, str) else cast(raw)
        except ValueError:
            raise ConfigError(f"bad value for {key}: {raw!r}") from None
    return out


def parse_config_text(text: str) -> dict:
    items = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        items[key] = value
    return items


def load_config(path=None, **overrides) -> HarnessConfig:
    """File values, then the output-dir environment variable, then flags."""
    base = {}
    if path is not None:
        base = parse_config_text(Path(path).read_text(encoding="utf-8"))
    env = os.environ.get(OUTPUT_ENV)
    if env:
        base["output_dir"] = env
    cfg = HarnessConfig(**_coerce(base))
    return cfg.updated(**overrides)
