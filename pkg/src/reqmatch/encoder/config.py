"""Encoder hyperparameters with validation."""

from __future__ import annotations

from dataclasses import dataclass, asdict

from ..errors import ConfigError
from ..textprep import MAX_SEQUENCE_LEN


@dataclass(frozen=True)
class EncoderConfig:
    """Shape of the transformer: one weight set serves both inputs of a pair."""

    vocab_size: int
    hidden_dim: int = 64
    num_layers: int = 2
    num_heads: int = 4
    ff_dim: int = 256
    max_len: int = 128
    dropout_prob: float = 0.1

    def __post_init__(self):
        for name in ("vocab_size", "hidden_dim", "num_layers", "num_heads", "ff_dim", "max_len"):
            value = getattr(self, name)
            if not isinstance(value, int) or value <= 0:
                raise ConfigError(f"{name} must be a positive integer, got {value!r}")
        if self.hidden_dim % self.num_heads != 0:
            raise ConfigError(
                f"hidden_dim {self.hidden_dim} is not divisible by num_heads {self.num_heads}"
            )
        if self.max_len > MAX_SEQUENCE_LEN:
            raise ConfigError(f"max_len must not exceed {MAX_SEQUENCE_LEN}")
        if not 0.0 <= self.dropout_prob < 1.0:
            raise ConfigError("dropout_prob must lie in [0, 1)")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "EncoderConfig":
        try:
            return cls(**d)
        except TypeError as e:
            raise ConfigError(f"bad encoder config: {e}")
