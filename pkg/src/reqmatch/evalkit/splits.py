"""Split construction with held-out requirement groups.

Annotations touching a held-out (unseen) requirement all land in
test_unseen; a paragraph that also carries seen annotations is excluded
from the other splits entirely, so no text leaks across the boundary. The
remaining paragraphs are partitioned at the paragraph level. Invariants
are machine-checked on every build, never assumed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ..errors import DataError, UsageError

SPLIT_NAMES = ("train", "val", "test_seen", "test_unseen")


@dataclass(frozen=True)
class DatasetSplit:
    """Named list of (paragraph_id, requirement_id, language) records."""

    name: str
    records: tuple

    def paragraph_ids(self) -> set:
        return {pid for pid, _rid, _lang in self.records}

    def requirement_ids(self) -> set:
        return {rid for _pid, rid, _lang in self.records}

    def languages(self) -> set:
        return {lang for _pid, _rid, lang in self.records}


def check_split_invariants(splits) -> None:
    """Raise unless the seen/unseen and disjointness contracts hold."""
    by_name = {s.name: s for s in splits}
    train = by_name["train"]
    unseen = by_name["test_unseen"]
    seen_test = by_name["test_seen"]

    if not seen_test.requirement_ids() <= train.requirement_ids():
        raise DataError("test_seen contains a requirement missing from train")
    if unseen.requirement_ids() & train.requirement_ids():
        raise DataError("an unseen requirement leaked into train")
    if unseen.requirement_ids() & by_name["val"].requirement_ids():
        raise DataError("an unseen requirement leaked into val")
    if unseen.requirement_ids() & seen_test.requirement_ids():
        raise DataError("an unseen requirement leaked into test_seen")

    names = [s.name for s in splits]
    for i, a in enumerate(splits):
        for b in splits[i + 1:]:
            shared = a.paragraph_ids() & b.paragraph_ids()
            if shared:
                raise DataError(
                    f"paragraph(s) {sorted(shared)[:3]} appear in both {a.name} and {b.name}"
                )
    if sorted(names) != sorted(SPLIT_NAMES):
        raise DataError(f"expected splits {SPLIT_NAMES}, got {names}")


def make_splits(
    annotations,
    unseen_requirement_ids: set,
    fractions: tuple,
    rng_seed: int,
    languages: dict | None = None,
) -> list:
    """Partition annotations into train/val/test_seen/test_unseen.

    annotations: (paragraph_id, requirement_id) pairs. languages maps
    paragraph_id to its tag; absent entries default to "all". fractions
    are (train, val, test) over paragraphs not touching unseen ids; a sum
    below 1 leaves the remainder out of every split.
    """
    pairs = [(a[0], a[1]) for a in annotations]
    if not pairs:
        raise DataError("cannot split an empty annotation list")
    languages = languages or {}

    all_rids = {rid for _pid, rid in pairs}
    unseen = set(unseen_requirement_ids)
    if not unseen <= all_rids:
        raise DataError(f"unseen ids not present in annotations: {sorted(unseen - all_rids)[:3]}")
    if unseen == all_rids:
        raise DataError("unseen set covers every requirement; nothing left to train on")

    if len(fractions) != 3 or any(f <= 0 for f in fractions):
        raise UsageError("fractions must be three positive numbers")
    if sum(fractions) > 1.0 + 1e-9:
        raise UsageError("fractions must sum to at most 1")

    def rec(pid, rid):
        return (pid, rid, languages.get(pid, "all"))

    unseen_paragraphs = {pid for pid, rid in pairs if rid in unseen}
    test_unseen = [rec(pid, rid) for pid, rid in pairs if rid in unseen]

    remaining = sorted({pid for pid, rid in pairs if pid not in unseen_paragraphs})
    rng = np.random.default_rng(rng_seed)
    order = [remaining[i] for i in rng.permutation(len(remaining))]

    n = len(order)
    n_train = int(fractions[0] * n)
    n_val = int(fractions[1] * n)
    if abs(sum(fractions) - 1.0) <= 1e-9:
        n_test = n - n_train - n_val
    else:
        n_test = int(fractions[2] * n)
    assignment = {}
    for pid in order[:n_train]:
        assignment[pid] = "train"
    for pid in order[n_train:n_train + n_val]:
        assignment[pid] = "val"
    for pid in order[n_train + n_val:n_train + n_val + n_test]:
        assignment[pid] = "test_seen"

    buckets = {"train": [], "val": [], "test_seen": []}
    for pid, rid in pairs:
        if pid in unseen_paragraphs:
            continue
        where = assignment.get(pid)
        if where is not None:
            buckets[where].append(rec(pid, rid))

    # repair: a requirement tested as "seen" must have training support;
    # move its lowest paragraph id from test_seen into train
    def rids_of(records):
        return {rid for _pid, rid, _lang in records}

    for rid in sorted(rids_of(buckets["test_seen"]) - rids_of(buckets["train"])):
        if rid in rids_of(buckets["train"]):
            continue
        candidates = sorted(pid for pid, r, _lang in buckets["test_seen"] if r == rid)
        move = candidates[0]
        moving = [r for r in buckets["test_seen"] if r[0] == move]
        buckets["test_seen"] = [r for r in buckets["test_seen"] if r[0] != move]
        buckets["train"].extend(moving)

    splits = [
        DatasetSplit(name="train", records=tuple(buckets["train"])),
        DatasetSplit(name="val", records=tuple(buckets["val"])),
        DatasetSplit(name="test_seen", records=tuple(buckets["test_seen"])),
        DatasetSplit(name="test_unseen", records=tuple(test_unseen)),
    ]
    check_split_invariants(splits)
    return splits


def save_splits(splits, path) -> None:
    payload = [
        {"name": s.name, "records": [list(r) for r in s.records]} for s in splits
    ]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def load_splits(path) -> list:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise DataError(f"no splits file at {path}")
    except json.JSONDecodeError as e:
        raise DataError(f"unreadable splits file: {e}")
    splits = [
        DatasetSplit(name=d["name"], records=tuple(tuple(r) for r in d["records"]))
        for d in raw
    ]
    check_split_invariants(splits)
    return splits
