"""Transformer forward pass, pooling, and the cosine scoring head.

Layout is pre-norm residual with a final layer norm; attention keys at PAD
positions receive a large negative score bias so their softmax weight
underflows to exactly zero. Dropout fires only in train mode and draws from
a generator seeded per call, so inference is deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DataError, UsageError
from ..numcore import Tensor, ops, tensor
from ..textprep import TokenSequence, encode
from .config import EncoderConfig
from .weights import EncoderWeights

# additive score bias for masked-out attention keys; exp() of it underflows
PAD_SCORE_BIAS = -1.0e9


@dataclass(frozen=True)
class SentenceEmbedding:
    """Mean-pooled sentence vector, hidden_dim wide."""

    vector: np.ndarray

    def __post_init__(self):
        if not np.all(np.isfinite(self.vector)):
            raise DataError("sentence embedding contains NaN or Inf")


def key_padding_bias(mask: np.ndarray) -> Tensor:
    """[B,T] {0,1} mask -> [B,1,1,T] additive score bias constant."""
    bias = (1.0 - mask.astype(np.float32)) * PAD_SCORE_BIAS
    return tensor(bias[:, None, None, :], requires_grad=False)


def causal_bias(t: int) -> Tensor:
    """[1,1,T,T] additive bias hiding future positions."""
    upper = np.triu(np.ones((t, t), dtype=np.float32), k=1) * PAD_SCORE_BIAS
    return tensor(upper[None, None, :, :], requires_grad=False)


def multi_head_attention(
    xq: Tensor,
    xkv: Tensor,
    weights,
    prefix: str,
    num_heads: int,
    score_bias,
    dropout_prob: float,
    train_mode: bool,
    rng,
    capture=None,
) -> Tensor:
    """Scaled dot-product attention; xq and xkv may differ (cross-attention)."""
    b, tq, h = xq.shape
    tk = xkv.shape[-2]
    d = h // num_heads

    q = ops.add(ops.matmul(xq, weights[f"{prefix}.wq"]), weights[f"{prefix}.bq"])
    k = ops.add(ops.matmul(xkv, weights[f"{prefix}.wk"]), weights[f"{prefix}.bk"])
    v = ops.add(ops.matmul(xkv, weights[f"{prefix}.wv"]), weights[f"{prefix}.bv"])

    q = ops.transpose(ops.reshape(q, (b, tq, num_heads, d)), (0, 2, 1, 3))
    k = ops.transpose(ops.reshape(k, (b, tk, num_heads, d)), (0, 2, 3, 1))
    v = ops.transpose(ops.reshape(v, (b, tk, num_heads, d)), (0, 2, 1, 3))

    scores = ops.scale(ops.matmul(q, k), 1.0 / math.sqrt(d))
    if score_bias is not None:
        scores = ops.add(scores, score_bias)
    probs = ops.softmax_rows(scores)
    if capture is not None:
        capture.setdefault("attention", []).append(probs.data.copy())
    if train_mode and dropout_prob > 0.0:
        probs = ops.dropout(probs, dropout_prob, rng)

    ctx = ops.matmul(probs, v)
    ctx = ops.reshape(ops.transpose(ctx, (0, 2, 1, 3)), (b, tq, h))
    return ops.add(ops.matmul(ctx, weights[f"{prefix}.wo"]), weights[f"{prefix}.bo"])


def feed_forward(x: Tensor, weights, prefix: str) -> Tensor:
    hidden = ops.gelu(ops.add(ops.matmul(x, weights[f"{prefix}.w1"]), weights[f"{prefix}.b1"]))
    return ops.add(ops.matmul(hidden, weights[f"{prefix}.w2"]), weights[f"{prefix}.b2"])


def forward_batch(
    ids: np.ndarray,
    mask: np.ndarray,
    weights: EncoderWeights,
    config: EncoderConfig,
    train_mode: bool = False,
    rng_seed: int = 0,
    capture=None,
) -> Tensor:
    """Encode [B,T] id/mask arrays into [B,T,hidden] token states."""
    if ids.ndim != 2 or ids.shape != mask.shape:
        raise UsageError("ids and mask must be matching [batch, length] arrays")
    b, t = ids.shape
    if t > config.max_len:
        raise UsageError(f"sequence length {t} exceeds config max_len {config.max_len}")
    if ids.size and int(ids.max()) >= config.vocab_size:
        raise DataError(f"token id {int(ids.max())} is out of range for vocab_size {config.vocab_size}")
    if ids.size and int(ids.min()) < 0:
        raise DataError("negative token id")

    rng = np.random.default_rng(rng_seed)
    p = config.dropout_prob

    x = ops.embedding(weights["tok_emb"], ids)
    x = ops.add(x, ops.take_rows(weights["pos_emb"], np.arange(t)))
    if train_mode and p > 0.0:
        x = ops.dropout(x, p, rng)

    pad_bias = key_padding_bias(mask)
    for i in range(config.num_layers):
        prefix = f"layer{i}"
        normed = ops.layer_norm(x, weights[f"{prefix}.ln1.gain"], weights[f"{prefix}.ln1.bias"])
        att = multi_head_attention(
            normed, normed, weights, f"{prefix}.att", config.num_heads,
            pad_bias, p, train_mode, rng, capture,
        )
        if train_mode and p > 0.0:
            att = ops.dropout(att, p, rng)
        x = ops.add(x, att)

        normed = ops.layer_norm(x, weights[f"{prefix}.ln2.gain"], weights[f"{prefix}.ln2.bias"])
        ff = feed_forward(normed, weights, f"{prefix}.ff")
        if train_mode and p > 0.0:
            ff = ops.dropout(ff, p, rng)
        x = ops.add(x, ff)

    return ops.layer_norm(x, weights["final_ln.gain"], weights["final_ln.bias"])


def forward_tokens(
    seq: TokenSequence,
    weights: EncoderWeights,
    config: EncoderConfig,
    train_mode: bool = False,
    rng_seed: int = 0,
) -> Tensor:
    """Token states [len(seq), hidden] for one sequence."""
    ids = np.asarray(seq.ids, dtype=np.int64)[None, :]
    mask = np.asarray(seq.attention_mask, dtype=np.int64)[None, :]
    states = forward_batch(ids, mask, weights, config, train_mode, rng_seed)
    return ops.reshape(states, states.shape[1:])


def mean_pool(token_states, attention_mask) -> SentenceEmbedding:
    """Average token states over mask==1 positions; PAD never contributes."""
    data = token_states.data if isinstance(token_states, Tensor) else np.asarray(token_states)
    mask = np.asarray(attention_mask)
    if data.ndim != 2 or mask.shape != (data.shape[0],):
        raise UsageError("mean_pool expects [T,H] states and a length-T mask")
    count = int(mask.sum())
    if count == 0:
        raise UsageError("mean_pool: attention mask selects no positions")
    pooled = data[mask == 1].mean(axis=0)
    if not np.any(pooled):
        raise UsageError("mean_pool produced a zero embedding")
    return SentenceEmbedding(vector=pooled.astype(np.float32))


def _as_vector(v) -> np.ndarray:
    if isinstance(v, SentenceEmbedding):
        return v.vector
    return np.asarray(v)


def cosine_similarity(u, v) -> float:
    """u.v / (|u||v|), clamped into [-1, 1] against float rounding."""
    a = _as_vector(u).astype(np.float64)
    b = _as_vector(v).astype(np.float64)
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise UsageError("cosine_similarity is undefined for a zero vector")
    return float(np.clip(np.dot(a, b) / (na * nb), -1.0, 1.0))


def encode_text(text: str, checkpoint) -> SentenceEmbedding:
    """Tokenize, run the encoder in inference mode, mean-pool.

    Trailing PAD positions are dropped before the forward pass; masked
    attention makes them inert, so this only saves work.
    """
    seq = encode(text, checkpoint.vocab, checkpoint.config.max_len)
    real = sum(seq.attention_mask)
    ids = np.asarray(seq.ids[:real], dtype=np.int64)[None, :]
    mask = np.ones((1, real), dtype=np.int64)
    states = forward_batch(ids, mask, checkpoint.weights, checkpoint.config)
    return mean_pool(ops.reshape(states, states.shape[1:]), mask[0])
