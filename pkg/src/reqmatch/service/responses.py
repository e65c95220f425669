"""Response assembly shared by the CLI and the HTTP server.

Both surfaces call the same functions on the same loaded objects, so a
wire response and a terminal printout can never disagree. Scores are
rounded to 6 decimal digits at this boundary and nowhere else.
"""

from __future__ import annotations

from ..errors import UsageError
from ..matcher import top_k

DIRECTIONS = {"requirements": "requirement", "paragraphs": "paragraph"}
SCORE_DIGITS = 6


def match_response(text, direction, k, checkpoint, index) -> dict:
    """Rank index entries for a query text; the one matching code path."""
    if not isinstance(text, str) or not text.strip():
        raise UsageError("text must be a non-empty string")
    if direction not in DIRECTIONS:
        raise UsageError(
            f"direction must be one of {sorted(DIRECTIONS)}, got {direction!r}"
        )
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise UsageError("k must be an integer >= 1")
    ranked = top_k(text, index, DIRECTIONS[direction], k, checkpoint)
    return {
        "direction": direction,
        "k": k,
        "hits": [
            {"id": item_id, "score": round(score, SCORE_DIGITS)}
            for item_id, score in ranked.hits
        ],
    }


def requirements_response(corpus, store) -> dict:
    """Checklist inventory with per-requirement verdict tallies."""
    counts = store.verdict_counts() if store is not None else {}
    rows = []
    for r in corpus.requirements:
        tally = counts.get(r.id, {"accepted": 0, "rejected": 0})
        rows.append(
            {
                "id": r.id,
                "description": r.description,
                "language": r.language,
                "accepted": tally["accepted"],
                "rejected": tally["rejected"],
            }
        )
    return {"requirements": rows}
