"""Corpus storage: three tab-separated files plus a manifest.

Field order, one record per line, text field last so it may contain tabs:
  paragraphs.tsv    id <TAB> report_id <TAB> language <TAB> text
  requirements.tsv  id <TAB> language <TAB> description
  annotations.tsv   paragraph_id <TAB> requirement_id
Newlines cannot appear inside a record; paragraph segmentation happens
upstream. The manifest names the trio and the checklist size.
"""

from __future__ import annotations

import json
import os

from ..errors import DataError
from .records import AnnotationRecord, Corpus, ParagraphRecord, RequirementRecord

MANIFEST_FILE = "corpus.json"
PARAGRAPH_FILE = "paragraphs.tsv"
REQUIREMENT_FILE = "requirements.tsv"
ANNOTATION_FILE = "annotations.tsv"


def _parse_lines(path, n_fields, builder):
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t", n_fields - 1)
            if len(parts) != n_fields:
                raise DataError(
                    f"{os.path.basename(str(path))}:{lineno}: expected {n_fields} fields, got {len(parts)}"
                )
            try:
                out.append(builder(parts))
            except DataError as e:
                raise DataError(f"{os.path.basename(str(path))}:{lineno}: {e}")
    return out


def load_corpus(directory) -> tuple:
    """Read a corpus directory; returns (paragraphs, requirements, annotations).

    Referential integrity is validated: every annotation must resolve both
    ways, ids must be unique, duplicate annotations are rejected.
    """
    manifest_path = os.path.join(directory, MANIFEST_FILE)
    if not os.path.exists(manifest_path):
        raise DataError(f"no corpus manifest at {manifest_path}")
    with open(manifest_path, "r", encoding="utf-8") as fh:
        try:
            manifest = json.load(fh)
        except json.JSONDecodeError as e:
            raise DataError(f"unreadable corpus manifest: {e}")
    for key in ("paragraphs", "requirements", "annotations"):
        if key not in manifest:
            raise DataError(f"corpus manifest missing {key!r}")

    paragraphs = _parse_lines(
        os.path.join(directory, manifest["paragraphs"]), 4,
        lambda p: ParagraphRecord(id=p[0], report_id=p[1], language=p[2], text=p[3]),
    )
    requirements = _parse_lines(
        os.path.join(directory, manifest["requirements"]), 3,
        lambda p: RequirementRecord(id=p[0], language=p[1], description=p[2]),
    )
    annotations = _parse_lines(
        os.path.join(directory, manifest["annotations"]), 2,
        lambda p: AnnotationRecord(paragraph_id=p[0], requirement_id=p[1]),
    )
    corpus = Corpus(paragraphs, requirements, annotations)
    declared = manifest.get("checklist_size")
    if declared is not None and declared != len(corpus.requirements):
        raise DataError(
            f"manifest declares {declared} requirements, files hold {len(corpus.requirements)}"
        )
    return corpus.paragraphs, corpus.requirements, corpus.annotations


def load_corpus_bundle(directory) -> Corpus:
    paragraphs, requirements, annotations = load_corpus(directory)
    return Corpus(paragraphs, requirements, annotations)


def _check_writable(text: str, what: str) -> str:
    if "\n" in text or "\r" in text:
        raise DataError(f"{what} contains a newline and cannot be stored")
    return text


def save_corpus(corpus: Corpus, directory) -> None:
    os.makedirs(directory, exist_ok=True)
    with open(os.path.join(directory, PARAGRAPH_FILE), "w", encoding="utf-8") as fh:
        for p in corpus.paragraphs:
            for field_value in (p.id, p.report_id, p.language):
                if "\t" in field_value:
                    raise DataError(f"paragraph {p.id}: tab in a key field")
            fh.write(f"{p.id}\t{p.report_id}\t{p.language}\t{_check_writable(p.text, 'paragraph text')}\n")
    with open(os.path.join(directory, REQUIREMENT_FILE), "w", encoding="utf-8") as fh:
        for r in corpus.requirements:
            if "\t" in r.id or "\t" in r.language:
                raise DataError(f"requirement {r.id}: tab in a key field")
            fh.write(f"{r.id}\t{r.language}\t{_check_writable(r.description, 'requirement description')}\n")
    with open(os.path.join(directory, ANNOTATION_FILE), "w", encoding="utf-8") as fh:
        for a in corpus.annotations:
            fh.write(f"{a.paragraph_id}\t{a.requirement_id}\n")
    manifest = {
        "paragraphs": PARAGRAPH_FILE,
        "requirements": REQUIREMENT_FILE,
        "annotations": ANNOTATION_FILE,
        "checklist_size": len(corpus.requirements),
    }
    with open(os.path.join(directory, MANIFEST_FILE), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
