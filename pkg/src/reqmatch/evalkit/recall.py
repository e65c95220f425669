"""One-shot recall@k: did any gold requirement make the top-k list."""

from __future__ import annotations

from ..errors import UsageError


def one_shot_recall(predictions, gold: dict, k: int) -> float:
    """Mean over paragraphs of [any gold id among the top-k hits].

    predictions: RankedList objects whose query_id keys into gold, a map
    paragraph_id -> set of requirement ids. A paragraph with several gold
    requirements scores 1.0 as soon as any one of them appears.
    """
    if not predictions:
        raise UsageError("one_shot_recall needs at least one prediction")
    if k < 1:
        raise UsageError("k must be at least 1")
    hits = 0
    for ranked in predictions:
        if ranked.query_id not in gold:
            raise UsageError(f"prediction for unknown paragraph {ranked.query_id}")
        want = gold[ranked.query_id]
        top = [item_id for item_id, _score in ranked.hits[:k]]
        if any(item_id in want for item_id in top):
            hits += 1
    return hits / len(predictions)
