import numpy as np
import pytest

from helpers import tiny_checkpoint

from reqmatch.errors import DataError, UsageError
from reqmatch.evalkit import (
    DatasetSplit,
    check_split_invariants,
    evaluate_checkpoint,
    make_splits,
    one_shot_recall,
    render_report_table,
)
from reqmatch.matcher import RankedList


def ranked(pid, ids):
    hits = tuple((rid, 1.0 - 0.01 * i) for i, rid in enumerate(ids))
    return RankedList(query_id=pid, hits=hits, k_requested=len(ids))


# --- one_shot_recall -----------------------------------------------------------

def test_recall_all_first():
    preds = [ranked(f"P_{i}", [f"R_{i}", "R_x"]) for i in range(4)]
    gold = {f"P_{i}": {f"R_{i}"} for i in range(4)}
    assert one_shot_recall(preds, gold, k=2) == 1.0


def test_recall_none():
    preds = [ranked(f"P_{i}", ["R_no"]) for i in range(4)]
    gold = {f"P_{i}": {f"R_{i}"} for i in range(4)}
    assert one_shot_recall(preds, gold, k=1) == 0.0


def test_recall_nine_of_ten_is_point_nine():
    preds = [ranked(f"P_{i}", [f"R_{i}"]) for i in range(9)]
    preds.append(ranked("P_9", ["R_wrong"]))
    gold = {f"P_{i}": {f"R_{i}"} for i in range(10)}
    assert one_shot_recall(preds, gold, k=5) == 0.9


def test_recall_any_gold_counts():
    preds = [ranked("P_0", ["R_b"])]
    gold = {"P_0": {"R_a", "R_b"}}
    assert one_shot_recall(preds, gold, k=1) == 1.0


def test_recall_monotone_in_k():
    rng = np.random.default_rng(0)
    reqs = [f"R_{i}" for i in range(10)]
    preds, gold = [], {}
    for i in range(30):
        order = list(rng.permutation(reqs))
        preds.append(ranked(f"P_{i}", order))
        gold[f"P_{i}"] = {reqs[int(rng.integers(10))]}
    values = [one_shot_recall(preds, gold, k) for k in range(1, 11)]
    assert values == sorted(values)
    assert values[-1] == 1.0


def test_recall_matches_brute_force_recount():
    rng = np.random.default_rng(42)
    reqs = [f"R_{i}" for i in range(12)]
    for _trial in range(100):
        n = int(rng.integers(1, 15))
        k = int(rng.integers(1, 7))
        preds, gold = [], {}
        for i in range(n):
            order = list(rng.permutation(reqs))[: int(rng.integers(1, 12))]
            preds.append(ranked(f"P_{i}", order))
            gold[f"P_{i}"] = {reqs[int(rng.integers(12))]}
        brute = sum(
            1 for p in preds if set(i for i, _s in p.hits[:k]) & gold[p.query_id]
        ) / n
        assert one_shot_recall(preds, gold, k) == brute


def test_recall_validation_errors():
    with pytest.raises(UsageError):
        one_shot_recall([], {}, k=5)
    with pytest.raises(UsageError):
        one_shot_recall([ranked("P_0", ["R_0"])], {"other": set()}, k=5)


# --- make_splits -----------------------------------------------------------------

def toy_annotations(n_reqs=10, per=4):
    anns = []
    for r in range(n_reqs):
        for j in range(per):
            anns.append((f"P_{r:02d}_{j}", f"R_{r:02d}"))
    return anns


def test_empty_unseen_set():
    splits = make_splits(toy_annotations(), set(), (0.6, 0.2, 0.2), rng_seed=1)
    by = {s.name: s for s in splits}
    assert by["test_unseen"].records == ()
    total = sum(len(s.paragraph_ids()) for s in splits)
    assert total == 40


def test_unseen_annotations_quarantined():
    unseen = {"R_00", "R_01"}
    splits = make_splits(toy_annotations(), unseen, (0.6, 0.2, 0.2), rng_seed=3)
    by = {s.name: s for s in splits}
    assert by["test_unseen"].requirement_ids() == unseen
    assert len(by["test_unseen"].records) == 8
    for name in ("train", "val", "test_seen"):
        assert not by[name].requirement_ids() & unseen


def test_unseen_covering_everything_rejected():
    anns = toy_annotations(n_reqs=3)
    with pytest.raises(DataError):
        make_splits(anns, {"R_00", "R_01", "R_02"}, (0.6, 0.2, 0.2), rng_seed=0)


def test_unknown_unseen_id_rejected():
    with pytest.raises(DataError):
        make_splits(toy_annotations(), {"R_99"}, (0.6, 0.2, 0.2), rng_seed=0)


def test_fraction_validation():
    with pytest.raises(UsageError):
        make_splits(toy_annotations(), set(), (0.8, 0.3, 0.2), rng_seed=0)
    with pytest.raises(UsageError):
        make_splits(toy_annotations(), set(), (0.8, -0.1, 0.2), rng_seed=0)


def test_splits_deterministic():
    a = make_splits(toy_annotations(), {"R_00"}, (0.6, 0.2, 0.2), rng_seed=5)
    b = make_splits(toy_annotations(), {"R_00"}, (0.6, 0.2, 0.2), rng_seed=5)
    assert [s.records for s in a] == [s.records for s in b]


def test_languages_carried_per_record():
    langs = {f"P_{r:02d}_{j}": ("de" if r % 2 == 0 else "en") for r in range(10) for j in range(4)}
    splits = make_splits(toy_annotations(), {"R_00"}, (0.6, 0.2, 0.2), 7, languages=langs)
    for s in splits:
        for pid, _rid, lang in s.records:
            assert lang == langs[pid]


def test_invariant_audit_over_100_seeds():
    anns = toy_annotations(n_reqs=12, per=3)
    # a paragraph with both a seen and an unseen annotation must vanish
    # from the seen-side splits entirely
    anns.append(("P_00_0", "R_05"))
    unseen = {"R_00", "R_01", "R_02"}
    for seed in range(100):
        splits = make_splits(anns, unseen, (0.6, 0.2, 0.2), rng_seed=seed)
        check_split_invariants(splits)
        by = {s.name: s for s in splits}
        assert not by["train"].requirement_ids() & unseen
        assert by["test_seen"].requirement_ids() <= by["train"].requirement_ids()
        names = ["train", "val", "test_seen", "test_unseen"]
        for i, a in enumerate(names):
            for b in names[i + 1:]:
                assert not by[a].paragraph_ids() & by[b].paragraph_ids()
        # the mixed paragraph sits in test_unseen only
        assert "P_00_0" in by["test_unseen"].paragraph_ids()
        for name in ("train", "val", "test_seen"):
            assert "P_00_0" not in by[name].paragraph_ids()


def test_check_split_invariants_catches_leak():
    bad = [
        DatasetSplit(name="train", records=(("P_1", "R_0", "all"),)),
        DatasetSplit(name="val", records=()),
        DatasetSplit(name="test_seen", records=(("P_2", "R_1", "all"),)),
        DatasetSplit(name="test_unseen", records=(("P_3", "R_0", "all"),)),
    ]
    with pytest.raises(DataError):
        check_split_invariants(bad)


# --- evaluate_checkpoint ------------------------------------------------------------

def oracle_eval_setup():
    req_texts = {
        "C_1_1": "net revenue is disclosed",
        "C_1_2": "lease terms are described",
        "C_1_3": "cash flow statement lists items",
    }
    para_texts = {
        "P_1": "net revenue is disclosed",
        "P_2": "lease terms are described",
        "P_3": "cash flow statement lists items",
    }
    splits = [
        DatasetSplit(name="train", records=(("P_0", "C_1_1", "de"),)),
        DatasetSplit(name="val", records=()),
        DatasetSplit(
            name="test_seen",
            records=(("P_1", "C_1_1", "de"), ("P_2", "C_1_2", "en")),
        ),
        DatasetSplit(name="test_unseen", records=(("P_3", "C_1_3", "de"),)),
    ]
    return req_texts, para_texts, splits


def test_evaluate_identical_texts_score_one():
    # each test paragraph is literally its requirement's text, so even an
    # untrained encoder must put the right requirement first
    ckpt = tiny_checkpoint()
    req_texts, para_texts, splits = oracle_eval_setup()
    report = evaluate_checkpoint(ckpt, splits, req_texts, para_texts, k=1)
    assert report.recall("test_seen") == 1.0
    assert report.recall("test_unseen") == 1.0
    assert report.cells[("test_seen", "de")] == (1.0, 1)
    assert report.cells[("test_seen", "en")] == (1.0, 1)
    assert report.k == 1


def test_evaluate_requires_test_split():
    ckpt = tiny_checkpoint()
    req_texts, para_texts, _ = oracle_eval_setup()
    with pytest.raises(UsageError):
        evaluate_checkpoint(
            ckpt, [DatasetSplit(name="train", records=())], req_texts, para_texts
        )


def test_evaluate_missing_requirement_text():
    ckpt = tiny_checkpoint()
    req_texts, para_texts, splits = oracle_eval_setup()
    del req_texts["C_1_3"]
    with pytest.raises(DataError, match="C_1_3"):
        evaluate_checkpoint(ckpt, splits, req_texts, para_texts)


def test_evaluate_missing_paragraph_text():
    ckpt = tiny_checkpoint()
    req_texts, para_texts, splits = oracle_eval_setup()
    del para_texts["P_2"]
    with pytest.raises(DataError, match="P_2"):
        evaluate_checkpoint(ckpt, splits, req_texts, para_texts)


def test_report_table_rendering():
    ckpt = tiny_checkpoint()
    req_texts, para_texts, splits = oracle_eval_setup()
    report = evaluate_checkpoint(ckpt, splits, req_texts, para_texts, k=2)
    table = render_report_table([report])
    assert "test_seen/all" in table
    assert "untrained" in table
    assert "1.000" in table
