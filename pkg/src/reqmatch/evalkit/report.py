"""Checkpoint evaluation against the full requirement inventory."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import DataError, UsageError
from ..matcher import build_index, recommend_requirements
from .recall import one_shot_recall

ALL_LANGUAGES = "all"


@dataclass(frozen=True)
class EvalReport:
    """recall@k per (split, language) cell plus checkpoint provenance."""

    cells: dict
    provenance: str
    k: int

    def recall(self, split: str, language: str = ALL_LANGUAGES) -> float:
        return self.cells[(split, language)][0]

    def to_dict(self) -> dict:
        return {
            "provenance": self.provenance,
            "k": self.k,
            "cells": [
                {"split": s, "language": l, "recall": r, "count": n}
                for (s, l), (r, n) in sorted(self.cells.items())
            ],
        }


def evaluate_checkpoint(
    checkpoint,
    splits,
    requirement_texts: dict,
    paragraph_texts: dict,
    k: int = 5,
) -> EvalReport:
    """Rank every test paragraph against ALL requirements; report recall@k.

    requirement_texts must cover the full checklist (seen and unseen
    together): unseen requirements compete against the whole inventory,
    which is what makes their evaluation honestly zero-shot.
    """
    test_splits = [s for s in splits if s.name.startswith("test")]
    if not test_splits:
        raise UsageError("evaluate_checkpoint needs at least one test split")

    for split in test_splits:
        for _pid, rid, _lang in split.records:
            if rid not in requirement_texts:
                raise DataError(f"missing requirement text for annotated id {rid}")

    index = build_index(
        [(rid, "requirement", text) for rid, text in sorted(requirement_texts.items())],
        checkpoint,
    )

    cells: dict = {}
    for split in test_splits:
        gold: dict = {}
        lang_of: dict = {}
        for pid, rid, lang in split.records:
            gold.setdefault(pid, set()).add(rid)
            lang_of[pid] = lang
        if not gold:
            continue  # split exists but holds no paragraphs; no cell to report
        predictions = {}
        for pid in sorted(gold):
            if pid not in paragraph_texts:
                raise DataError(f"missing paragraph text for annotated id {pid}")
            predictions[pid] = recommend_requirements(
                paragraph_texts[pid], index, checkpoint, k=k, query_id=pid
            )

        groups: dict = {ALL_LANGUAGES: sorted(gold)}
        for pid, lang in lang_of.items():
            groups.setdefault(lang, []).append(pid)
        for lang, pids in sorted(groups.items()):
            pids = sorted(pids)
            value = one_shot_recall([predictions[p] for p in pids], gold, k)
            cells[(split.name, lang)] = (value, len(pids))

    return EvalReport(cells=cells, provenance=checkpoint.describe(), k=k)


def render_report_table(reports) -> str:
    """Aligned table: one row per training recipe, columns split x language."""
    if not reports:
        return "(no reports)"
    columns = sorted({key for rep in reports for key in rep.cells})
    header = ["recipe"] + [f"{s}/{l}" for s, l in columns]
    body = []
    for rep in reports:
        row = [rep.provenance]
        for key in columns:
            cell = rep.cells.get(key)
            row.append(f"{cell[0]:.3f}" if cell else "-")
        body.append(row)
    widths = [max(len(r[i]) for r in [header] + body) for i in range(len(header))]
    lines = []
    for row in [header] + body:
        lines.append(
            "  ".join(
                cell.ljust(widths[i]) if i == 0 else cell.rjust(widths[i])
                for i, cell in enumerate(row)
            )
        )
    return "\n".join(lines)
