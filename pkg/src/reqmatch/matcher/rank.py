"""Exact top-k retrieval by cosine, both query directions."""

from __future__ import annotations

from dataclasses import dataclass

from ..encoder import cosine_similarity, encode_text
from ..errors import UsageError
from .index import EmbeddingIndex


@dataclass(frozen=True)
class RankedList:
    """Hits ordered by non-increasing score; ties broken by ascending id."""

    query_id: str
    hits: tuple
    k_requested: int

    def ids(self) -> list:
        return [item_id for item_id, _score in self.hits]


def rank_entries(query_vector, entries, k: int, query_id: str = "query") -> RankedList:
    """Exact scoring of one query vector against index entries.

    Brute force by design: checklist and report sizes make exact search
    cheap, and results stay bit-reproducible. Ties break toward the
    ascending item id.
    """
    if k < 1:
        raise UsageError("k must be at least 1")
    scored = [
        (e.item_id, cosine_similarity(query_vector, e.vector)) for e in entries
    ]
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return RankedList(query_id=query_id, hits=tuple(scored[:k]), k_requested=k)


def top_k(
    query_text: str,
    index: EmbeddingIndex,
    target_kind: str,
    k: int,
    checkpoint,
    query_id: str = "query",
) -> RankedList:
    """Embed the query text and rank every entry of target_kind."""
    if k < 1:
        raise UsageError("k must be at least 1")
    query = encode_text(query_text, checkpoint)
    return rank_entries(query, index.of_kind(target_kind), k, query_id)


def recommend_requirements(
    paragraph_text: str, index, checkpoint, k: int = 5, query_id: str = "query"
) -> RankedList:
    return top_k(paragraph_text, index, "requirement", k, checkpoint, query_id)


def recommend_paragraphs(
    requirement_text: str, index, checkpoint, k: int = 5, query_id: str = "query"
) -> RankedList:
    return top_k(requirement_text, index, "paragraph", k, checkpoint, query_id)
