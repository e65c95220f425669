"""Named parameter set for the transformer encoder.

Weights live in one insertion-ordered name -> Tensor map so the optimizer,
the serializer, and the forward pass all agree on a single canonical order.
"""

from __future__ import annotations

import numpy as np

from ..errors import DataError
from ..numcore import Tensor, tensor
from .config import EncoderConfig

INIT_STD = 0.02


def parameter_names(config: EncoderConfig) -> list:
    """Canonical tensor order for a given config."""
    names = ["tok_emb", "pos_emb"]
    for i in range(config.num_layers):
        p = f"layer{i}"
        names += [f"{p}.ln1.gain", f"{p}.ln1.bias"]
        names += [f"{p}.att.{n}" for n in ("wq", "bq", "wk", "bk", "wv", "bv", "wo", "bo")]
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
    raise DataError(f"unknown parameter name {name}")


class EncoderWeights:
    """Insertion-ordered parameter map; every tensor requires gradients."""

    def __init__(self, tensors: dict, config: EncoderConfig):
        expected = parameter_names(config)
        if list(tensors.keys()) != expected:
            raise DataError("parameter names do not match the encoder config")
        for name, t in tensors.items():
            want = _shape_of(name, config)
            if t.shape != want:
                raise DataError(f"parameter {name} has shape {t.shape}, expected {want}")
        self.tensors = tensors
        self.config = config

    def __getitem__(self, name: str) -> Tensor:
        return self.tensors[name]

    def names(self) -> list:
        return list(self.tensors.keys())

    def params(self) -> list:
        return list(self.tensors.values())

    def arrays(self) -> dict:
        return {n: t.data for n, t in self.tensors.items()}

    def copy(self) -> "EncoderWeights":
        fresh = {
            n: tensor(t.data.copy(), requires_grad=True) for n, t in self.tensors.items()
        }
        return EncoderWeights(fresh, self.config)


def init_encoder_weights(config: EncoderConfig, rng_seed: int) -> EncoderWeights:
    """Gaussian init (std 0.02) for matrices, ones/zeros for norms and biases."""
    rng = np.random.default_rng(rng_seed)
    tensors: dict = {}
    for name in parameter_names(config):
        shape = _shape_of(name, config)
        leaf = name.rsplit(".", 1)[-1]
        if leaf == "gain":
            data = np.ones(shape, dtype=np.float32)
        elif leaf in ("bias", "bq", "bk", "bv", "bo", "b1", "b2"):
            data = np.zeros(shape, dtype=np.float32)
        else:
            data = rng.normal(0.0, INIT_STD, size=shape).astype(np.float32)
        tensors[name] = tensor(data, requires_grad=True)
    return EncoderWeights(tensors, config)
