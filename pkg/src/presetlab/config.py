"""Runtime configuration: an INI file plus PRESETLAB_* environment overrides.

Everything has a working default so `presetlab serve` runs with no config
file at all (reference schema, generated bank, spectral provider).
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DataError

ENV_PREFIX = "PRESETLAB_"


@dataclass(frozen=True)
class AppConfig:
    schema_path: str | None = None  # None -> packaged reference schema
    bank_path: str | None = None  # None -> deterministic generated bank
    bank_size: int = 512
    bank_seed: int = 1337
    provider: str = "spectral"  # spectral | file:PATH | hybrid:PATH
    host: str = "127.0.0.1"
    port: int = 8000
    search_k: int = 50
    example_columns: int = 10
    importance_corpus: int = 100
    mix_ops_per_pair: int = 5
    smoothing_alpha: float = 1.0
    state_dir: str | None = None  # None -> no persistence
    static_dir: str | None = None  # None -> autodetect frontend/dist

    def require_positive(self):
        for name in ("bank_size", "port", "search_k", "example_columns",
                     "importance_corpus", "mix_ops_per_pair"):
            if getattr(self, name) <= 0:
                raise DataError(f"config: {name} must be positive")
        if self.smoothing_alpha <= 0:
            raise DataError("config: smoothing_alpha must be positive")
        return self


_INT_KEYS = {"bank_size", "bank_seed", "port", "search_k", "example_columns",
             "importance_corpus", "mix_ops_per_pair"}
_FLOAT_KEYS = {"smoothing_alpha"}
_STR_KEYS = {"schema_path", "bank_path", "provider", "host", "state_dir", "static_dir"}


def _coerce(key: str, raw: str):
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
    except ValueError as exc:
        raise DataError(f"config: bad value for {key}: {raw!r}") from exc
    return raw


def load_config(path: str | os.PathLike | None = None,
                env: dict | None = None) -> AppConfig:
    """Precedence: defaults < [presetlab] section of the INI < environment."""
    env = os.environ if env is None else env
    overrides: dict = {}

    if path is not None:
        p = Path(path)
        if not p.is_file():
            raise DataError(f"config file not found: {p}")
        parser = configparser.ConfigParser()
        try:
            parser.read_string(p.read_text(encoding="utf-8"))
        except configparser.Error as exc:
            raise DataError(f"config: {exc}") from exc
        if parser.has_section("presetlab"):
            for key, raw in parser.items("presetlab"):
                if key not in _INT_KEYS | _FLOAT_KEYS | _STR_KEYS:
                    raise DataError(f"config: unknown key {key!r}")
                overrides[key] = _coerce(key, raw)

    for key in _INT_KEYS | _FLOAT_KEYS | _STR_KEYS:
        env_name = ENV_PREFIX + key.upper()
        if env_name in env:
            overrides[key] = _coerce(key, env[env_name])

    return AppConfig(**overrides).require_positive()
