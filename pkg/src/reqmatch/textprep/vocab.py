"""Subword vocabulary: greedy pair-merge training plus file round-trip.

The learner whitespace-splits the corpus, represents each word as characters
with a "##" continuation marker on word-internal pieces, then repeatedly
merges the most frequent adjacent pair until the size budget is exhausted or
no pair clears ``min_frequency``. Ties break toward the lexicographically
smallest pair so retraining on identical input yields an identical token
list.
"""

from __future__ import annotations

import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from ..errors import DataError, UsageError

PAD_ID = 0
UNK_ID = 1
CLS_ID = 2
SEP_ID = 3
MASK_ID = 4

RESERVED_TOKENS = ("[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]")

CONTINUATION = "##"


@dataclass(frozen=True)
class Vocabulary:
    """Immutable token inventory with dense ids 0..len-1.

    Ids 0..4 are the reserved PAD/UNK/CLS/SEP/MASK tokens in that order.
    """

    tokens: tuple
    id_of: dict = field(repr=False)

    def __len__(self) -> int:
        return len(self.tokens)

    def __post_init__(self):
        if self.tokens[: len(RESERVED_TOKENS)] != RESERVED_TOKENS:
            raise DataError("vocabulary must start with the reserved tokens")
        if len(set(self.tokens)) != len(self.tokens):
            raise DataError("vocabulary contains duplicate surface forms")


def _make_vocabulary(extra_tokens) -> Vocabulary:
    tokens = RESERVED_TOKENS + tuple(extra_tokens)
    return Vocabulary(tokens=tokens, id_of={t: i for i, t in enumerate(tokens)})


def _word_symbols(word: str) -> list:
    return [word[0]] + [CONTINUATION + ch for ch in word[1:]]


def train_vocab(corpus: Iterable[str], target_size: int, min_frequency: int = 2) -> Vocabulary:
    """Learn a subword vocabulary of at most target_size tokens.

    target_size counts the five reserved tokens; target_size == 5 yields a
    vocabulary of reserved tokens only.
    """
    if target_size < len(RESERVED_TOKENS):
        raise UsageError("target_size must be at least 5 to hold the reserved tokens")
    if min_frequency < 1:
        raise UsageError("min_frequency must be at least 1")

    word_freq: Counter = Counter()
    for line in corpus:
        for word in unicodedata.normalize("NFC", line).split():
            word_freq[word] += 1
    if not word_freq:
        raise DataError("cannot train a vocabulary on an empty corpus")

    seqs = {w: _word_symbols(w) for w in word_freq}

    sym_freq: Counter = Counter()
    for w, f in word_freq.items():
        for s in seqs[w]:
            sym_freq[s] += f

    budget = target_size - len(RESERVED_TOKENS)
    alphabet = [s for s in sym_freq if sym_freq[s] >= min_frequency]
    if len(alphabet) > budget:
        # keep the most frequent symbols, surface form breaking ties
        alphabet = sorted(alphabet, key=lambda s: (-sym_freq[s], s))[:budget]
    alphabet.sort()

    known = set(RESERVED_TOKENS) | set(alphabet)
    merged: list = []
    while len(alphabet) + len(merged) < budget:
        pair_freq: Counter = Counter()
        for w, f in word_freq.items():
            s = seqs[w]
            for i in range(len(s) - 1):
                pair_freq[(s[i], s[i + 1])] += f
        if not pair_freq:
            break
        (left, right), best_f = sorted(
            pair_freq.items(), key=lambda kv: (-kv[1], kv[0])
        )[0]
        if best_f < min_frequency:
            break
        # the right element of a word-internal pair always carries "##"
        new_sym = left + right[len(CONTINUATION):]
        for w in seqs:
            s = seqs[w]
            out = []
            i = 0
            while i < len(s):
                if i + 1 < len(s) and s[i] == left and s[i + 1] == right:
                    out.append(new_sym)
                    i += 2
                else:
                    out.append(s[i])
                    i += 1
            seqs[w] = out
        if new_sym not in known:
            merged.append(new_sym)
            known.add(new_sym)

    return _make_vocabulary(alphabet + merged)


def save_vocab(vocab: Vocabulary, path) -> None:
    """Write one token per line; the line number is the id."""
    with open(path, "w", encoding="utf-8") as fh:
        for token in vocab.tokens:
            fh.write(token + "\n")


def load_vocab(path) -> Vocabulary:
    with open(path, "r", encoding="utf-8") as fh:
        tokens = [line.rstrip("\n") for line in fh]
    while tokens and tokens[-1] == "":
        tokens.pop()
    if len(tokens) < len(RESERVED_TOKENS):
        raise DataError(f"vocabulary file {path} is missing the reserved tokens")
    if tuple(tokens[: len(RESERVED_TOKENS)]) != RESERVED_TOKENS:
        raise DataError(f"vocabulary file {path} has a malformed reserved-token block")
    if len(set(tokens)) != len(tokens):
        raise DataError(f"vocabulary file {path} contains duplicate tokens")
    return _make_vocabulary(tokens[len(RESERVED_TOKENS):])
