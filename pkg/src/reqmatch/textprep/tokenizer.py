"""Greedy longest-match subword encoding and its inverse.

A word is consumed left to right, always taking the longest vocabulary piece
that fits; pieces after the first must carry the "##" continuation marker.
A word with no valid segmentation becomes a single UNK token.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass

from ..errors import DataError, UsageError
from .vocab import (
    CLS_ID,
    CONTINUATION,
    PAD_ID,
    SEP_ID,
    Vocabulary,
    UNK_ID,
)

MAX_SEQUENCE_LEN = 512


@dataclass(frozen=True)
class TokenSequence:
    """Fixed-length id sequence with a parallel attention mask.

    ids[0] is CLS and SEP closes the real content; attention_mask is 1
    exactly on non-PAD positions. original_length is the untruncated token
    count (CLS and SEP included), so original_length > len(ids) means the
    text was cut to fit.
    """

    ids: tuple
    attention_mask: tuple
    original_length: int

    def __post_init__(self):
        if len(self.ids) != len(self.attention_mask):
            raise DataError("ids and attention_mask lengths differ")

    @property
    def content_positions(self) -> tuple:
        """Indices holding real tokens other than CLS and SEP."""
        return tuple(
            i
            for i, (tid, m) in enumerate(zip(self.ids, self.attention_mask))
            if m == 1 and tid not in (CLS_ID, SEP_ID)
        )


def _word_pieces(word: str, vocab: Vocabulary) -> list:
    pieces = []
    i = 0
    while i < len(word):
        end = len(word)
        match = None
        while end > i:
            candidate = word[i:end]
            if i > 0:
                candidate = CONTINUATION + candidate
            if candidate in vocab.id_of:
                match = candidate
                break
            end -= 1
        if match is None:
            return [UNK_ID]
        pieces.append(vocab.id_of[match])
        i = end
    return pieces


def encode(text: str, vocab: Vocabulary, max_len: int) -> TokenSequence:
    """Tokenize text into CLS + pieces + SEP, truncated and PAD-filled to max_len."""
    if max_len < 3:
        raise UsageError("max_len must be at least 3 (CLS, one token, SEP)")
    if max_len > MAX_SEQUENCE_LEN:
        raise UsageError(f"max_len must not exceed {MAX_SEQUENCE_LEN}")

    ids = [CLS_ID]
    for word in unicodedata.normalize("NFC", text).split():
        ids.extend(_word_pieces(word, vocab))
    ids.append(SEP_ID)

    original_length = len(ids)
    if len(ids) > max_len:
        ids = ids[: max_len - 1] + [SEP_ID]
    real = len(ids)
    ids.extend([PAD_ID] * (max_len - real))
    mask = [1] * real + [0] * (max_len - real)
    return TokenSequence(
        ids=tuple(ids), attention_mask=tuple(mask), original_length=original_length
    )


def decode(seq: TokenSequence, vocab: Vocabulary) -> str:
    """Recover the surface string: markers fused, PAD/CLS/SEP dropped."""
    words: list = []
    for tid, m in zip(seq.ids, seq.attention_mask):
        if m == 0:
            continue
        if tid < 0 or tid >= len(vocab.tokens):
            raise DataError(f"token id {tid} is out of range for this vocabulary")
        if tid in (PAD_ID, CLS_ID, SEP_ID):
            continue
        surface = vocab.tokens[tid]
        if surface.startswith(CONTINUATION) and words:
            words[-1] += surface[len(CONTINUATION):]
        else:
            words.append(surface)
    return " ".join(words)
