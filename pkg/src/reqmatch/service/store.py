"""Append-only annotation store with a deterministic supervised export.

Every verdict a reviewer records lands as one JSON line; nothing is ever
rewritten, so the full history stays auditable. The current state of a
(paragraph, requirement) pair is its latest verdict; replaying an event
that matches the current state changes nothing. The export folds the log
into accepted pairs in the corpus annotation format.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass

from ..errors import DataError

VERDICTS = ("accept", "reject")
SOURCES = ("ui", "cli", "import")


@dataclass(frozen=True)
class AnnotationEvent:
    paragraph_id: str
    requirement_id: str
    verdict: str
    timestamp: float
    source: str = "ui"

    def __post_init__(self):
        if not self.paragraph_id or not self.requirement_id:
            raise DataError("annotation event needs both ids")
        if self.verdict not in VERDICTS:
            raise DataError(f"verdict must be one of {VERDICTS}, got {self.verdict!r}")
        if self.source not in SOURCES:
            raise DataError(f"source must be one of {SOURCES}, got {self.source!r}")

    def key(self) -> tuple:
        return (self.paragraph_id, self.requirement_id)

    def to_dict(self) -> dict:
        return {
            "paragraph_id": self.paragraph_id,
            "requirement_id": self.requirement_id,
            "verdict": self.verdict,
            "timestamp": self.timestamp,
            "source": self.source,
        }


def make_event(paragraph_id, requirement_id, verdict, source="ui", timestamp=None):
    return AnnotationEvent(
        paragraph_id=paragraph_id,
        requirement_id=requirement_id,
        verdict=verdict,
        timestamp=time.time() if timestamp is None else float(timestamp),
        source=source,
    )


class AnnotationStore:
    """JSONL-backed event log; appends are flushed to disk before returning."""

    def __init__(self, path):
        self.path = str(path)
        self._latest: dict = {}
        self._count = 0
        if os.path.exists(self.path):
            for event in self.events():
                self._latest[event.key()] = event.verdict
                self._count += 1

    def __len__(self) -> int:
        return self._count

    def append(self, event: AnnotationEvent) -> bool:
        """Write the event unless it repeats the pair's current verdict.

        Returns True when a line was written, False for the idempotent
        replay. The write is durable before this returns.
        """
        if self._latest.get(event.key()) == event.verdict:
            return False
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(event.to_dict(), sort_keys=True))
            fh.write("\n")
            fh.flush()
            os.fsync(fh.fileno())
        self._latest[event.key()] = event.verdict
        self._count += 1
        return True

    def events(self) -> list:
        if not os.path.exists(self.path):
            return []
        out = []
        with open(self.path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    raw = json.loads(line)
                    out.append(AnnotationEvent(**raw))
                except (json.JSONDecodeError, TypeError, DataError) as e:
                    raise DataError(f"{os.path.basename(self.path)}:{lineno}: {e}")
        return out

    def latest_verdicts(self) -> dict:
        """(paragraph_id, requirement_id) -> current verdict."""
        return dict(self._latest)

    def verdict_counts(self) -> dict:
        """requirement_id -> {"accepted": n, "rejected": n} over current state."""
        out: dict = {}
        for (_pid, rid), verdict in self._latest.items():
            bucket = out.setdefault(rid, {"accepted": 0, "rejected": 0})
            bucket["accepted" if verdict == "accept" else "rejected"] += 1
        return out


def export_supervised(store: AnnotationStore) -> str:
    """Accepted pairs in the corpus annotation format, sorted by id pair.

    One `paragraph_id<TAB>requirement_id` line per pair whose latest
    verdict is accept; rejected and overridden pairs are omitted.
    """
    accepted = sorted(
        key for key, verdict in store.latest_verdicts().items() if verdict == "accept"
    )
    return "".join(f"{pid}\t{rid}\n" for pid, rid in accepted)
