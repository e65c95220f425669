"""Service configuration: JSON file, overridable per key via environment."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, asdict

from ..errors import ConfigError

# environment variable per field, highest precedence
ENV_PREFIX = "REQMATCH_"
ENV_KEYS = {
    "host": "HOST",
    "port": "PORT",
    "checkpoint_dir": "CHECKPOINT",
    "index_dir": "INDEX",
    "corpus_dir": "CORPUS",
    "store_path": "STORE",
    "default_k": "DEFAULT_K",
}


@dataclass(frozen=True)
class ServiceConfig:
    checkpoint_dir: str
    index_dir: str
    corpus_dir: str
    store_path: str
    host: str = "127.0.0.1"
    port: int = 8000
    default_k: int = 5

    def __post_init__(self):
        if self.default_k < 1:
            raise ConfigError("default_k must be at least 1")
        if not 0 < self.port < 65536:
            raise ConfigError(f"port {self.port} out of range")
        for name in ("checkpoint_dir", "index_dir", "corpus_dir", "store_path"):
            if not getattr(self, name):
                raise ConfigError(f"service config is missing {name}")

    def to_dict(self) -> dict:
        return asdict(self)


def load_service_config(path=None, env=None, overrides=None) -> ServiceConfig:
    """Assemble config: JSON file, then REQMATCH_* variables, then overrides."""
    env = os.environ if env is None else env
    raw: dict = {}
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"no service config file at {path}")
        except json.JSONDecodeError as e:
            raise ConfigError(f"unreadable service config: {e}")
        unknown = set(raw) - set(ENV_KEYS)
        if unknown:
            raise ConfigError(f"unknown service config keys: {sorted(unknown)}")

    for field_name, suffix in ENV_KEYS.items():
        value = env.get(ENV_PREFIX + suffix)
        if value is not None:
            raw[field_name] = value
    for field_name, value in (overrides or {}).items():
        if value is not None:
            raw[field_name] = value
    for int_field in ("port", "default_k"):
        if int_field in raw:
            try:
                raw[int_field] = int(raw[int_field])
            except (TypeError, ValueError):
                raise ConfigError(f"{int_field} must be an integer, got {raw[int_field]!r}")

    try:
        return ServiceConfig(**raw)
    except TypeError as e:
        raise ConfigError(f"bad service config: {e}")
