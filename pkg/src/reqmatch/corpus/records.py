"""Record types for paragraphs, checklist requirements, and annotations."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import DataError


@dataclass(frozen=True)
class ParagraphRecord:
    id: str
    text: str
    report_id: str
    language: str

    def __post_init__(self):
        if not self.id:
            raise DataError("paragraph id must be non-empty")
        if not self.text.strip():
            raise DataError(f"paragraph {self.id} has empty text")


@dataclass(frozen=True)
class RequirementRecord:
    id: str
    description: str
    language: str

    def __post_init__(self):
        if not self.id:
            raise DataError("requirement id must be non-empty")
        if not self.description.strip():
            raise DataError(f"requirement {self.id} has an empty description")


@dataclass(frozen=True)
class AnnotationRecord:
    paragraph_id: str
    requirement_id: str


@dataclass
class Corpus:
    """Validated, id-sorted corpus with lookup maps."""

    paragraphs: list
    requirements: list
    annotations: list
    paragraph_by_id: dict = field(default_factory=dict, repr=False)
    requirement_by_id: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.paragraphs = sorted(self.paragraphs, key=lambda p: p.id)
        self.requirements = sorted(self.requirements, key=lambda r: r.id)
        self.annotations = sorted(
            self.annotations, key=lambda a: (a.paragraph_id, a.requirement_id)
        )
        self.paragraph_by_id = {p.id: p for p in self.paragraphs}
        self.requirement_by_id = {r.id: r for r in self.requirements}
        if len(self.paragraph_by_id) != len(self.paragraphs):
            raise DataError("duplicate paragraph id")
        if len(self.requirement_by_id) != len(self.requirements):
            raise DataError("duplicate requirement id")
        seen = set()
        for a in self.annotations:
            if a.paragraph_id not in self.paragraph_by_id:
                raise DataError(
                    f"annotation references missing paragraph {a.paragraph_id}"
                )
            if a.requirement_id not in self.requirement_by_id:
                raise DataError(
                    f"annotation references missing requirement {a.requirement_id}"
                )
            key = (a.paragraph_id, a.requirement_id)
            if key in seen:
                raise DataError(f"duplicate annotation {key}")
            seen.add(key)

    def gold_map(self) -> dict:
        """paragraph_id -> set of annotated requirement ids."""
        gold: dict = {}
        for a in self.annotations:
            gold.setdefault(a.paragraph_id, set()).add(a.requirement_id)
        return gold

    def annotated_paragraph_ids(self) -> list:
        return sorted(self.gold_map().keys())

    def distractor_paragraph_ids(self) -> list:
        gold = self.gold_map()
        return [p.id for p in self.paragraphs if p.id not in gold]
