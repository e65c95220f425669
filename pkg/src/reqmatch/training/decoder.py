"""Throwaway reconstruction decoder for the denoising stage.

The decoder is a causal transformer whose cross-attention sees exactly one
memory slot: the pooled sentence embedding of the corrupted input. Squeezing
the whole sequence through that bottleneck is what forces the encoder to
produce informative pooled vectors. The decoder has its own parameters,
trains jointly with the encoder, and is dropped when the stage ends; the
readout projection is tied to the decoder's own token embedding.
"""

from __future__ import annotations

import numpy as np

from ..encoder.config import EncoderConfig
from ..encoder.model import causal_bias, feed_forward, key_padding_bias, multi_head_attention
from ..encoder.weights import INIT_STD
from ..errors import DataError, UsageError
from ..numcore import Tensor, ops, tensor


def decoder_parameter_names(config: EncoderConfig) -> list:
    names = ["tok_emb", "pos_emb"]
    for i in range(config.num_layers):
        p = f"layer{i}"
        names += [f"{p}.ln1.gain", f"{p}.ln1.bias"]
        names += [f"{p}.att.{n}" for n in ("wq", "bq", "wk", "bk", "wv", "bv", "wo", "bo")]
        names += [f"{p}.lnx.gain", f"{p}.lnx.bias"]
        names += [f"{p}.xatt.{n}" for n in ("wq", "bq", "wk", "bk", "wv", "bv", "wo", "bo")]
        names += [f"{p}.ln2.gain", f"{p}.ln2.bias"]
        names += [f"{p}.ff.{n}" for n in ("w1", "b1", "w2", "b2")]
    names += ["final_ln.gain", "final_ln.bias"]
    return names


def _shape_of(name: str, config: EncoderConfig) -> tuple:
    h, f = config.hidden_dim, config.ff_dim
    if name == "tok_emb":
        return (config.vocab_size, h)
    if name == "pos_emb":
        return (config.max_len, h)
    leaf = name.rsplit(".", 1)[-1]
    if leaf in ("gain", "bias"):
        return (h,)
    if leaf in ("wq", "wk", "wv", "wo"):
        return (h, h)
    if leaf in ("bq", "bk", "bv", "bo", "b2"):
        return (h,)
    if leaf == "w1":
        return (h, f)
    if leaf == "b1":
        return (f,)
    if leaf == "w2":
        return (f, h)
    raise DataError(f"unknown decoder parameter {name}")


class DecoderWeights:
    """Same ordered-map discipline as the encoder's parameter set."""

    def __init__(self, tensors: dict, config: EncoderConfig):
        expected = decoder_parameter_names(config)
        if list(tensors.keys()) != expected:
            raise DataError("parameter names do not match the decoder config")
        for name, t in tensors.items():
            want = _shape_of(name, config)
            if t.shape != want:
                raise DataError(f"decoder parameter {name} has shape {t.shape}, expected {want}")
        self.tensors = tensors
        self.config = config

    def __getitem__(self, name: str) -> Tensor:
        return self.tensors[name]

    def names(self) -> list:
        return list(self.tensors.keys())

    def params(self) -> list:
        return list(self.tensors.values())


def init_decoder_weights(config: EncoderConfig, rng_seed: int) -> DecoderWeights:
    rng = np.random.default_rng(rng_seed)
    tensors: dict = {}
    for name in decoder_parameter_names(config):
        shape = _shape_of(name, config)
        leaf = name.rsplit(".", 1)[-1]
        if leaf == "gain":
            data = np.ones(shape, dtype=np.float32)
        elif leaf in ("bias", "bq", "bk", "bv", "bo", "b1", "b2"):
            data = np.zeros(shape, dtype=np.float32)
        else:
            data = rng.normal(0.0, INIT_STD, size=shape).astype(np.float32)
        tensors[name] = tensor(data, requires_grad=True)
    return DecoderWeights(tensors, config)


def decoder_forward(
    ids: np.ndarray,
    mask: np.ndarray,
    memory: Tensor,
    weights: DecoderWeights,
    config: EncoderConfig,
    train_mode: bool = False,
    rng_seed: int = 0,
) -> Tensor:
    """Token states [B,T,H] under causal self-attention plus one-slot memory.

    memory is the pooled encoder output, [B,H]; it is the only thing the
    cross-attention can look at, so its softmax is trivially 1 over one key.
    """
    if ids.ndim != 2 or ids.shape != mask.shape:
        raise UsageError("ids and mask must be matching [batch, length] arrays")
    b, t = ids.shape
    if memory.shape != (b, config.hidden_dim):
        raise UsageError(f"memory must be [batch, hidden], got {memory.shape}")
    if t > config.max_len:
        raise UsageError(f"sequence length {t} exceeds config max_len {config.max_len}")

    rng = np.random.default_rng(rng_seed)
    p = config.dropout_prob
    mem = ops.reshape(memory, (b, 1, config.hidden_dim))

    x = ops.embedding(weights["tok_emb"], ids)
    x = ops.add(x, ops.take_rows(weights["pos_emb"], np.arange(t)))
    if train_mode and p > 0.0:
        x = ops.dropout(x, p, rng)

    # future positions and PAD keys are both hidden from self-attention
    self_bias = ops.add(causal_bias(t), key_padding_bias(mask))
    for i in range(config.num_layers):
        prefix = f"layer{i}"
        normed = ops.layer_norm(x, weights[f"{prefix}.ln1.gain"], weights[f"{prefix}.ln1.bias"])
        att = multi_head_attention(
            normed, normed, weights, f"{prefix}.att", config.num_heads,
            self_bias, p, train_mode, rng,
        )
        if train_mode and p > 0.0:
            att = ops.dropout(att, p, rng)
        x = ops.add(x, att)

        normed = ops.layer_norm(x, weights[f"{prefix}.lnx.gain"], weights[f"{prefix}.lnx.bias"])
        xatt = multi_head_attention(
            normed, mem, weights, f"{prefix}.xatt", config.num_heads,
            None, p, train_mode, rng,
        )
        if train_mode and p > 0.0:
            xatt = ops.dropout(xatt, p, rng)
        x = ops.add(x, xatt)

        normed = ops.layer_norm(x, weights[f"{prefix}.ln2.gain"], weights[f"{prefix}.ln2.bias"])
        ff = feed_forward(normed, weights, f"{prefix}.ff")
        if train_mode and p > 0.0:
            ff = ops.dropout(ff, p, rng)
        x = ops.add(x, ff)

    return ops.layer_norm(x, weights["final_ln.gain"], weights["final_ln.bias"])


def reconstruction_loss(
    clean_ids: np.ndarray,
    clean_mask: np.ndarray,
    pooled: Tensor,
    weights: DecoderWeights,
    config: EncoderConfig,
    train_mode: bool = False,
    rng_seed: int = 0,
) -> Tensor:
    """Teacher-forced next-token cross-entropy of the clean sequence.

    Input rows are the clean ids shifted right by one (position t predicts
    token t+1); only real target positions contribute. Logits come from the
    decoder's own token embedding, transposed.
    """
    b, t = clean_ids.shape
    if t < 2:
        raise UsageError("reconstruction needs sequences of length >= 2")
    in_ids, in_mask = clean_ids[:, :-1], clean_mask[:, :-1]
    target_ids, target_mask = clean_ids[:, 1:], clean_mask[:, 1:]

    states = decoder_forward(in_ids, in_mask, pooled, weights, config, train_mode, rng_seed)
    flat = ops.reshape(states, (b * (t - 1), config.hidden_dim))
    keep = np.flatnonzero(target_mask.reshape(-1) == 1)
    if keep.size == 0:
        raise UsageError("reconstruction loss has no unmasked targets")
    picked = ops.take_rows(flat, keep)
    logits = ops.matmul(picked, ops.transpose(weights["tok_emb"]))
    return ops.cross_entropy_rows(logits, target_ids.reshape(-1)[keep])
