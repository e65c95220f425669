"""Embedding index over paragraphs and requirements, with file round-trip."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass

import numpy as np

from ..encoder import checkpoint_fingerprint, encode_text
from ..errors import DataError, UsageError
from ..numcore import read_named_tensors, write_named_tensors

KINDS = ("paragraph", "requirement")

INDEX_MANIFEST = "index.json"
INDEX_PAYLOAD = "embeddings.bin"


@dataclass(frozen=True)
class IndexEntry:
    item_id: str
    kind: str
    vector: np.ndarray
    text_hash: str


@dataclass(frozen=True)
class EmbeddingIndex:
    """Immutable list of embedded items plus the producing checkpoint's print."""

    entries: tuple
    fingerprint: str

    def of_kind(self, kind: str) -> list:
        if kind not in KINDS:
            raise UsageError(f"unknown index kind {kind!r}")
        return [e for e in self.entries if e.kind == kind]

    def counts(self) -> dict:
        out = {k: 0 for k in KINDS}
        for e in self.entries:
            out[e.kind] += 1
        return out


def _text_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


def build_index(items, checkpoint) -> EmbeddingIndex:
    """Embed (id, kind, text) triples via encode_text; order is input order."""
    seen = set()
    entries = []
    for item_id, kind, text in items:
        if kind not in KINDS:
            raise UsageError(f"unknown index kind {kind!r} for item {item_id}")
        key = (kind, item_id)
        if key in seen:
            raise DataError(f"duplicate {kind} id {item_id} in index input")
        seen.add(key)
        emb = encode_text(text, checkpoint)
        entries.append(
            IndexEntry(item_id=item_id, kind=kind, vector=emb.vector, text_hash=_text_hash(text))
        )
    dims = {e.vector.shape[0] for e in entries}
    if len(dims) > 1:
        raise DataError("index entries disagree on embedding dimension")
    return EmbeddingIndex(entries=tuple(entries), fingerprint=checkpoint_fingerprint(checkpoint))


def save_index(index: EmbeddingIndex, directory) -> None:
    os.makedirs(directory, exist_ok=True)
    dim = index.entries[0].vector.shape[0] if index.entries else 0
    matrix = (
        np.stack([e.vector for e in index.entries])
        if index.entries
        else np.zeros((0, 0), dtype=np.float32)
    )
    write_named_tensors(os.path.join(directory, INDEX_PAYLOAD), {"embeddings": matrix})
    manifest = {
        "fingerprint": index.fingerprint,
        "dimension": dim,
        "counts": index.counts(),
        "items": [
            {"id": e.item_id, "kind": e.kind, "text_hash": e.text_hash}
            for e in index.entries
        ],
        "payload": INDEX_PAYLOAD,
    }
    with open(os.path.join(directory, INDEX_MANIFEST), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_index(directory) -> EmbeddingIndex:
    manifest_path = os.path.join(directory, INDEX_MANIFEST)
    if not os.path.exists(manifest_path):
        raise DataError(f"no index manifest at {manifest_path}")
    with open(manifest_path, "r", encoding="utf-8") as fh:
        try:
            manifest = json.load(fh)
        except json.JSONDecodeError as e:
            raise DataError(f"unreadable index manifest: {e}")
    arrays = read_named_tensors(os.path.join(directory, manifest["payload"]), ["embeddings"])
    matrix = arrays["embeddings"]
    items = manifest["items"]
    if matrix.shape[0] != len(items) and items:
        raise DataError("index payload row count disagrees with manifest")
    entries = tuple(
        IndexEntry(
            item_id=item["id"], kind=item["kind"],
            vector=matrix[i], text_hash=item["text_hash"],
        )
        for i, item in enumerate(items)
    )
    return EmbeddingIndex(entries=entries, fingerprint=manifest["fingerprint"])
