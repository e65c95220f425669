"""Corpus data model, storage, statistics, and the synthetic generator."""

from .records import AnnotationRecord, Corpus, ParagraphRecord, RequirementRecord
from .io import load_corpus, load_corpus_bundle, save_corpus
from .stats import CorpusStats, corpus_stats, render_stats_table
from .synthetic import bow_recall, generate_synthetic

__all__ = [
    "AnnotationRecord",
    "Corpus",
    "CorpusStats",
    "ParagraphRecord",
    "RequirementRecord",
    "bow_recall",
    "corpus_stats",
    "generate_synthetic",
    "load_corpus",
    "load_corpus_bundle",
    "render_stats_table",
    "save_corpus",
]
