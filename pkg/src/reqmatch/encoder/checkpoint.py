"""Checkpoint directory format: manifest + tensor payload + vocabulary.

A checkpoint directory holds:
  manifest.json  format version, config, tensor name order, provenance
  weights.bin    named tensors in the binary layout of numcore.serialize
  vocab.txt      one token per line

The fingerprint hashes config, provenance, vocabulary, and raw weight
bytes; two checkpoints compare equal exactly when their fingerprints do.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field

from ..errors import DataError
from ..numcore import read_named_tensors, tensor, write_named_tensors
from ..textprep import Vocabulary, load_vocab, save_vocab
from .config import EncoderConfig
from .weights import EncoderWeights, parameter_names

FORMAT_VERSION = 1

MANIFEST_FILE = "manifest.json"
WEIGHTS_FILE = "weights.bin"
VOCAB_FILE = "vocab.txt"


@dataclass
class Checkpoint:
    """Everything needed to embed a text: weights, config, vocabulary."""

    config: EncoderConfig
    weights: EncoderWeights
    vocab: Vocabulary
    provenance: list = field(default_factory=list)
    best_validation: float | None = None

    def describe(self) -> str:
        return "+".join(self.provenance) if self.provenance else "untrained"


def save_checkpoint(ckpt: Checkpoint, directory) -> None:
    os.makedirs(directory, exist_ok=True)
    names = write_named_tensors(
        os.path.join(directory, WEIGHTS_FILE), ckpt.weights.arrays()
    )
    save_vocab(ckpt.vocab, os.path.join(directory, VOCAB_FILE))
    manifest = {
        "format_version": FORMAT_VERSION,
        "config": ckpt.config.to_dict(),
        "vocab_file": VOCAB_FILE,
        "tensor_file": WEIGHTS_FILE,
        "tensor_names": names,
        "provenance": list(ckpt.provenance),
        "best_validation": ckpt.best_validation,
    }
    with open(os.path.join(directory, MANIFEST_FILE), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_checkpoint(directory) -> Checkpoint:
    manifest_path = os.path.join(directory, MANIFEST_FILE)
    if not os.path.exists(manifest_path):
        raise DataError(f"no checkpoint manifest at {manifest_path}")
    with open(manifest_path, "r", encoding="utf-8") as fh:
        try:
            manifest = json.load(fh)
        except json.JSONDecodeError as e:
            raise DataError(f"unreadable checkpoint manifest: {e}")
    if manifest.get("format_version") != FORMAT_VERSION:
        raise DataError(f"unsupported checkpoint format {manifest.get('format_version')}")

    config = EncoderConfig.from_dict(manifest["config"])
    expected = parameter_names(config)
    if manifest["tensor_names"] != expected:
        raise DataError("checkpoint tensor names do not match its config")

    vocab = load_vocab(os.path.join(directory, manifest["vocab_file"]))
    if len(vocab) != config.vocab_size:
        raise DataError(
            f"vocabulary size {len(vocab)} disagrees with config vocab_size {config.vocab_size}"
        )
    arrays = read_named_tensors(os.path.join(directory, manifest["tensor_file"]), expected)
    tensors = {n: tensor(arrays[n], requires_grad=True) for n in expected}
    return Checkpoint(
        config=config,
        weights=EncoderWeights(tensors, config),
        vocab=vocab,
        provenance=list(manifest.get("provenance", [])),
        best_validation=manifest.get("best_validation"),
    )


def checkpoint_fingerprint(ckpt: Checkpoint) -> str:
    """sha256 over config, provenance, vocabulary, and weight bytes."""
    h = hashlib.sha256()
    h.update(json.dumps(ckpt.config.to_dict(), sort_keys=True).encode("utf-8"))
    h.update(json.dumps(list(ckpt.provenance)).encode("utf-8"))
    h.update("\n".join(ckpt.vocab.tokens).encode("utf-8"))
    for name in ckpt.weights.names():
        h.update(name.encode("utf-8"))
        h.update(ckpt.weights[name].data.tobytes())
    return h.hexdigest()
