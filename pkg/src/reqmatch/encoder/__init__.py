"""Shared-weight transformer bi-encoder with mean pooling and cosine scoring."""

from .config import EncoderConfig
from .weights import EncoderWeights, init_encoder_weights, parameter_names
from .model import (
    SentenceEmbedding,
    causal_bias,
    cosine_similarity,
    encode_text,
    feed_forward,
    forward_batch,
    forward_tokens,
    key_padding_bias,
    mean_pool,
    multi_head_attention,
)
from .checkpoint import (
    Checkpoint,
    checkpoint_fingerprint,
    load_checkpoint,
    save_checkpoint,
)

__all__ = [
    "Checkpoint",
    "EncoderConfig",
    "EncoderWeights",
    "SentenceEmbedding",
    "causal_bias",
    "checkpoint_fingerprint",
    "cosine_similarity",
    "encode_text",
    "feed_forward",
    "forward_batch",
    "forward_tokens",
    "init_encoder_weights",
    "key_padding_bias",
    "load_checkpoint",
    "mean_pool",
    "multi_head_attention",
    "parameter_names",
    "save_checkpoint",
]
