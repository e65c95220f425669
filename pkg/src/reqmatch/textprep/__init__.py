"""Tokenization: vocabulary training, encoding, and corruption operators."""

from .vocab import (
    CLS_ID,
    CONTINUATION,
    MASK_ID,
    PAD_ID,
    RESERVED_TOKENS,
    SEP_ID,
    UNK_ID,
    Vocabulary,
    load_vocab,
    save_vocab,
    train_vocab,
)
from .tokenizer import MAX_SEQUENCE_LEN, TokenSequence, decode, encode
from .corruption import apply_mlm_mask, apply_tsdae_noise

__all__ = [
    "CLS_ID",
    "CONTINUATION",
    "MASK_ID",
    "MAX_SEQUENCE_LEN",
    "PAD_ID",
    "RESERVED_TOKENS",
    "SEP_ID",
    "UNK_ID",
    "TokenSequence",
    "Vocabulary",
    "apply_mlm_mask",
    "apply_tsdae_noise",
    "decode",
    "encode",
    "load_vocab",
    "save_vocab",
    "train_vocab",
]
