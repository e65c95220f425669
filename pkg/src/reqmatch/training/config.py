"""Stage configuration shared by all four training stages."""

from __future__ import annotations

import json
from dataclasses import dataclass, asdict

from ..errors import ConfigError

STAGE_KINDS = ("mlm", "simcse", "tsdae", "supervised")
CONTRASTIVE_KINDS = ("simcse", "supervised")


@dataclass(frozen=True)
class StageConfig:
    """One stage of the pipeline; defaults follow the published method family.

    temperature 0.05 is the contrastive default; mask_prob 0.15 and the
    80/10/10 split are the MLM defaults; noise_ratio 0.6 is the denoising
    mask fraction.
    """

    stage_kind: str
    max_steps: int
    batch_size: int = 16
    eval_every: int = 50
    learning_rate: float = 1e-3
    temperature: float = 0.05
    noise_ratio: float = 0.6
    mask_prob: float = 0.15
    rng_seed: int = 0
    validation_split: str = "val"

    def __post_init__(self):
        if self.stage_kind not in STAGE_KINDS:
            raise ConfigError(f"unknown stage kind {self.stage_kind!r}")
        if self.max_steps < 1:
            raise ConfigError("max_steps must be at least 1")
        if self.eval_every < 1:
            raise ConfigError("eval_every must be at least 1")
        if self.batch_size < 1:
            raise ConfigError("batch_size must be at least 1")
        if self.stage_kind in CONTRASTIVE_KINDS and self.batch_size < 2:
            raise ConfigError(
                f"{self.stage_kind} needs batch_size >= 2: in-batch negatives "
                "do not exist in a batch of one"
            )
        if self.learning_rate <= 0:
            raise ConfigError("learning_rate must be positive")
        if self.temperature <= 0:
            raise ConfigError("temperature must be positive")
        if not 0.0 <= self.noise_ratio <= 1.0:
            raise ConfigError("noise_ratio must lie in [0, 1]")
        if not 0.0 <= self.mask_prob < 1.0:
            raise ConfigError("mask_prob must lie in [0, 1)")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "StageConfig":
        try:
            return cls(**d)
        except TypeError as e:
            raise ConfigError(f"bad stage config: {e}")

    def descriptor(self) -> str:
        return self.stage_kind


def load_plan(path) -> list:
    """Training plan file: a JSON array of stage config objects."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"no training plan at {path}")
    except json.JSONDecodeError as e:
        raise ConfigError(f"unreadable training plan: {e}")
    if not isinstance(raw, list):
        raise ConfigError("training plan must be a JSON array of stages")
    return [StageConfig.from_dict(d) for d in raw]


def save_plan(plan, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump([stage.to_dict() for stage in plan], fh, indent=2)
        fh.write("\n")
