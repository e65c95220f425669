import numpy as np
import pytest

from reqmatch import textprep as tp
from reqmatch.errors import DataError, UsageError


def small_vocab():
    corpus = [
        "net revenue rose in the period",
        "net income and revenue are disclosed",
        "the report lists revenue risks",
    ]
    return tp.train_vocab(corpus, target_size=200, min_frequency=1)


# --- vocabulary training ------------------------------------------------------

def test_reserved_tokens_fixed_ids():
    v = small_vocab()
    assert v.tokens[:5] == ("[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]")
    assert v.id_of["[PAD]"] == 0 and v.id_of["[MASK]"] == 4


def test_repeated_word_merges_to_single_token():
    v = tp.train_vocab(["aa aa aa"], target_size=8, min_frequency=1)
    assert "aa" in v.tokens


def test_target_size_five_keeps_only_reserved():
    v = tp.train_vocab(["alpha beta"], target_size=5, min_frequency=1)
    assert len(v) == 5
    seq = tp.encode("alpha", v, max_len=8)
    assert seq.ids[1] == tp.UNK_ID


def test_training_is_deterministic():
    corpus = ["one two three two one", "three three one"]
    a = tp.train_vocab(corpus, target_size=40, min_frequency=1)
    b = tp.train_vocab(corpus, target_size=40, min_frequency=1)
    assert a.tokens == b.tokens


def test_empty_corpus_rejected():
    with pytest.raises(DataError):
        tp.train_vocab(["   ", ""], target_size=50)
    with pytest.raises(UsageError):
        tp.train_vocab(["x"], target_size=4)


def test_vocab_size_budget_respected():
    v = tp.train_vocab(["abcdefgh " * 5], target_size=10, min_frequency=1)
    assert len(v) <= 10


def test_ids_dense_and_unique():
    v = small_vocab()
    assert sorted(v.id_of.values()) == list(range(len(v)))
    assert len(set(v.tokens)) == len(v.tokens)


# --- encode / decode ----------------------------------------------------------

def test_encode_empty_string():
    v = small_vocab()
    seq = tp.encode("", v, max_len=6)
    assert seq.ids == (tp.CLS_ID, tp.SEP_ID, 0, 0, 0, 0)
    assert seq.attention_mask == (1, 1, 0, 0, 0, 0)


def test_encode_structure():
    v = small_vocab()
    seq = tp.encode("net revenue", v, max_len=16)
    assert seq.ids[0] == tp.CLS_ID
    real = sum(seq.attention_mask)
    assert seq.ids[real - 1] == tp.SEP_ID
    assert all(i == tp.PAD_ID for i in seq.ids[real:])
    assert len(seq.ids) == 16


def test_encode_truncates_and_keeps_sep():
    v = small_vocab()
    seq = tp.encode("net revenue rose in the period and more words", v, max_len=5)
    assert len(seq.ids) == 5
    assert seq.ids[-1] == tp.SEP_ID
    assert sum(seq.attention_mask) == 5
    assert seq.original_length > 5


def test_encode_max_len_bounds():
    v = small_vocab()
    with pytest.raises(UsageError):
        tp.encode("x", v, max_len=2)
    with pytest.raises(UsageError):
        tp.encode("x", v, max_len=513)


def test_round_trip_over_training_corpus():
    corpus = [
        "net revenue rose in the period",
        "net income and revenue are disclosed",
    ]
    v = tp.train_vocab(corpus, target_size=300, min_frequency=1)
    for line in corpus:
        seq = tp.encode(line, v, max_len=64)
        assert tp.decode(seq, v) == line


def test_decode_cls_sep_only_is_empty():
    v = small_vocab()
    seq = tp.TokenSequence(
        ids=(tp.CLS_ID, tp.SEP_ID), attention_mask=(1, 1), original_length=2
    )
    assert tp.decode(seq, v) == ""


def test_decode_mask_surfaces_literally():
    v = small_vocab()
    seq = tp.TokenSequence(
        ids=(tp.CLS_ID, tp.MASK_ID, tp.SEP_ID),
        attention_mask=(1, 1, 1),
        original_length=3,
    )
    assert tp.decode(seq, v) == "[MASK]"


def test_decode_out_of_range_id():
    v = small_vocab()
    seq = tp.TokenSequence(
        ids=(tp.CLS_ID, len(v) + 7, tp.SEP_ID),
        attention_mask=(1, 1, 1),
        original_length=3,
    )
    with pytest.raises(DataError):
        tp.decode(seq, v)


def test_vocab_file_round_trip(tmp_path):
    v = small_vocab()
    path = tmp_path / "vocab.txt"
    tp.save_vocab(v, path)
    back = tp.load_vocab(path)
    assert back.tokens == v.tokens
    first = path.read_text(encoding="utf-8").splitlines()[0]
    assert first == "[PAD]"


# --- MLM masking ---------------------------------------------------------------

def content_seq(n=10, max_len=16):
    ids = [tp.CLS_ID] + list(range(10, 10 + n)) + [tp.SEP_ID]
    real = len(ids)
    ids += [tp.PAD_ID] * (max_len - real)
    mask = [1] * real + [0] * (max_len - real)
    return tp.TokenSequence(ids=tuple(ids), attention_mask=tuple(mask), original_length=real)


def test_mlm_zero_prob_is_identity():
    seq = content_seq()
    out, targets = tp.apply_mlm_mask(seq, 0.0, rng_seed=3, vocab_size=60)
    assert out.ids == seq.ids
    assert targets == []


def test_mlm_never_touches_special_positions():
    seq = content_seq()
    for seed in range(200):
        out, targets = tp.apply_mlm_mask(seq, 0.5, rng_seed=seed, vocab_size=60)
        assert out.ids[0] == tp.CLS_ID
        assert out.ids[11] == tp.SEP_ID
        assert out.ids[12:] == seq.ids[12:]
        for pos, _ in targets:
            assert 1 <= pos <= 10


def test_mlm_monte_carlo_selection_rate():
    seq = content_seq(n=10)
    total = 0
    for seed in range(10_000):
        _, targets = tp.apply_mlm_mask(seq, 0.15, rng_seed=seed, vocab_size=60)
        total += len(targets)
    mean = total / 10_000
    assert abs(mean - 1.5) <= 0.1


def test_mlm_action_split_is_80_10_10():
    seq = content_seq(n=10)
    masked = replaced = kept = 0
    for seed in range(4000):
        out, targets = tp.apply_mlm_mask(seq, 0.5, rng_seed=seed, vocab_size=600)
        for pos, original in targets:
            if out.ids[pos] == tp.MASK_ID:
                masked += 1
            elif out.ids[pos] == original:
                kept += 1
            else:
                replaced += 1
    total = masked + replaced + kept
    assert abs(masked / total - 0.8) < 0.03
    # random replacement can coincide with the original, so replaced
    # undershoots 10% slightly; both side buckets stay near 0.1
    assert abs(replaced / total - 0.1) < 0.03
    assert abs(kept / total - 0.1) < 0.03


def test_mlm_targets_record_originals_and_determinism():
    seq = content_seq()
    out1, t1 = tp.apply_mlm_mask(seq, 0.4, rng_seed=77, vocab_size=60)
    out2, t2 = tp.apply_mlm_mask(seq, 0.4, rng_seed=77, vocab_size=60)
    assert out1.ids == out2.ids and t1 == t2
    for pos, original in t1:
        assert seq.ids[pos] == original


def test_mlm_random_tokens_stay_in_vocab_range():
    seq = content_seq()
    for seed in range(300):
        out, _ = tp.apply_mlm_mask(seq, 0.9, rng_seed=seed, vocab_size=30)
        for tid, m in zip(out.ids, out.attention_mask):
            if m:
                assert 0 <= tid < 30


# --- TSDAE noise -----------------------------------------------------------------

def test_tsdae_exact_count():
    seq = content_seq(n=10)
    out = tp.apply_tsdae_noise(seq, 0.6, rng_seed=5)
    assert sum(1 for i in out.ids if i == tp.MASK_ID) == 6


def test_tsdae_zero_ratio_identity():
    seq = content_seq()
    assert tp.apply_tsdae_noise(seq, 0.0, rng_seed=1).ids == seq.ids


def test_tsdae_full_ratio_masks_all_content():
    seq = content_seq(n=7, max_len=12)
    out = tp.apply_tsdae_noise(seq, 1.0, rng_seed=2)
    assert out.ids[0] == tp.CLS_ID and out.ids[8] == tp.SEP_ID
    assert all(out.ids[i] == tp.MASK_ID for i in range(1, 8))


def test_tsdae_rounds_half_up():
    seq = content_seq(n=5)
    out = tp.apply_tsdae_noise(seq, 0.5, rng_seed=9)
    assert sum(1 for i in out.ids if i == tp.MASK_ID) == 3


def test_tsdae_deterministic_and_ratio_validated():
    seq = content_seq()
    a = tp.apply_tsdae_noise(seq, 0.6, rng_seed=11)
    b = tp.apply_tsdae_noise(seq, 0.6, rng_seed=11)
    assert a.ids == b.ids
    with pytest.raises(UsageError):
        tp.apply_tsdae_noise(seq, 1.5, rng_seed=0)
