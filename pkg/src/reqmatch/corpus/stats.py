"""Per-split corpus statistics: paragraphs, words, distinct requirements."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import DataError
from .records import Corpus


@dataclass(frozen=True)
class CorpusStats:
    """Rows keyed by split name, each (paragraphs, words, requirements)."""

    rows: dict

    def row(self, name: str) -> tuple:
        return self.rows[name]


def _word_count(text: str) -> int:
    return len(text.split())


def corpus_stats(corpus: Corpus, splits=None) -> CorpusStats:
    """Count paragraphs, whitespace words, and distinct annotated requirements.

    With splits=None a single "all" row covers the whole corpus, distractor
    paragraphs included. With splits, each row covers one split's records.
    """
    rows: dict = {}
    if splits is None:
        words = sum(_word_count(p.text) for p in corpus.paragraphs)
        distinct = {a.requirement_id for a in corpus.annotations}
        rows["all"] = (len(corpus.paragraphs), words, len(distinct))
        return CorpusStats(rows=rows)

    for split in splits:
        pids = sorted({pid for pid, _rid, _lang in split.records})
        rids = {rid for _pid, rid, _lang in split.records}
        words = 0
        for pid in pids:
            para = corpus.paragraph_by_id.get(pid)
            if para is None:
                raise DataError(f"split {split.name} references missing paragraph {pid}")
            words += _word_count(para.text)
        rows[split.name] = (len(pids), words, len(rids))
    return CorpusStats(rows=rows)


def render_stats_table(stats: CorpusStats) -> str:
    """Aligned text table: one split per row, three numeric columns."""
    header = ("split", "paragraphs", "words", "requirements")
    body = [
        (name, str(p), str(w), str(r)) for name, (p, w, r) in stats.rows.items()
    ]
    widths = [max(len(row[i]) for row in [header] + body) for i in range(4)]
    lines = []
    for row in [header] + body:
        lines.append(
            "  ".join(cell.ljust(widths[i]) if i == 0 else cell.rjust(widths[i]) for i, cell in enumerate(row))
        )
    return "\n".join(lines)
