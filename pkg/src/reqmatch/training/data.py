"""Training data bundle derived from a corpus and its splits.

Unsupervised stages and vocabulary training see train-split paragraphs,
unannotated distractor paragraphs, and every requirement description (the
checklist text is public; only annotations are withheld). Validation and
test paragraphs never feed any stage.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..corpus import Corpus
from ..errors import DataError


@dataclass(frozen=True)
class PipelineData:
    unsupervised_texts: tuple
    supervised_pairs: tuple  # (paragraph_text, requirement_text, requirement_id)
    val_texts: tuple
    val_gold: dict
    val_paragraph_texts: dict
    requirement_texts: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.unsupervised_texts:
            raise DataError("no unsupervised training texts")


def build_pipeline_data(corpus: Corpus, splits) -> PipelineData:
    by_name = {s.name: s for s in splits}
    for needed in ("train", "val"):
        if needed not in by_name:
            raise DataError(f"splits are missing {needed!r}")

    requirement_texts = {r.id: r.description for r in corpus.requirements}

    train_pids = sorted(by_name["train"].paragraph_ids())
    distractor_pids = corpus.distractor_paragraph_ids()
    unsupervised = [corpus.paragraph_by_id[pid].text for pid in train_pids]
    unsupervised += [corpus.paragraph_by_id[pid].text for pid in distractor_pids]
    unsupervised += [requirement_texts[r.id] for r in corpus.requirements]

    pairs = []
    for pid, rid, _lang in by_name["train"].records:
        pairs.append((corpus.paragraph_by_id[pid].text, requirement_texts[rid], rid))

    val_gold: dict = {}
    for pid, rid, _lang in by_name["val"].records:
        val_gold.setdefault(pid, set()).add(rid)
    val_pids = sorted(val_gold)
    val_paragraph_texts = {pid: corpus.paragraph_by_id[pid].text for pid in val_pids}

    return PipelineData(
        unsupervised_texts=tuple(unsupervised),
        supervised_pairs=tuple(pairs),
        val_texts=tuple(val_paragraph_texts[pid] for pid in val_pids),
        val_gold=val_gold,
        val_paragraph_texts=val_paragraph_texts,
        requirement_texts=requirement_texts,
    )
