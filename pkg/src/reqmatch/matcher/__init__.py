"""Cosine top-k matching between paragraphs and checklist requirements."""

from .index import EmbeddingIndex, IndexEntry, build_index, load_index, save_index
from .rank import (
    RankedList,
    rank_entries,
    recommend_paragraphs,
    recommend_requirements,
    top_k,
)

__all__ = [
    "EmbeddingIndex",
    "IndexEntry",
    "RankedList",
    "build_index",
    "load_index",
    "rank_entries",
    "recommend_paragraphs",
    "recommend_requirements",
    "save_index",
    "top_k",
]
