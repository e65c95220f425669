"""Shared fixtures for tiny-encoder tests: small configs, float64 casts."""

import numpy as np

from reqmatch import textprep as tp
from reqmatch.encoder import Checkpoint, EncoderConfig, EncoderWeights, init_encoder_weights
from reqmatch.numcore import tensor


def tiny_config(vocab_size, **overrides):
    base = dict(
        vocab_size=vocab_size,
        hidden_dim=8,
        num_layers=2,
        num_heads=2,
        ff_dim=16,
        max_len=16,
        dropout_prob=0.1,
    )
    base.update(overrides)
    return EncoderConfig(**base)


def to_float64(weights: EncoderWeights) -> EncoderWeights:
    """Shadow copy of a weight set in float64 for finite-difference checks."""
    cast = {
        n: tensor(t.data.astype(np.float64), requires_grad=True, dtype=np.float64)
        for n, t in weights.tensors.items()
    }
    return EncoderWeights(cast, weights.config)


def tiny_vocab():
    corpus = [
        "net revenue rose in the period",
        "net income and revenue are disclosed",
        "assets and lease terms are described",
        "cash flow statement lists items",
    ]
    return tp.train_vocab(corpus, target_size=120, min_frequency=1)


def tiny_checkpoint(seed=0, **config_overrides) -> Checkpoint:
    vocab = tiny_vocab()
    config = tiny_config(len(vocab), **config_overrides)
    weights = init_encoder_weights(config, rng_seed=seed)
    return Checkpoint(config=config, weights=weights, vocab=vocab)
