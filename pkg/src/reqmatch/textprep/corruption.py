"""Masking operators that feed the reconstruction training stages.

Both operators are pure: the corrupted sequence is a function of the input,
the parameters, and the seed alone. Only content positions are eligible;
CLS, SEP, and PAD are never touched.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import UsageError
from .tokenizer import TokenSequence
from .vocab import MASK_ID, RESERVED_TOKENS


def apply_mlm_mask(
    seq: TokenSequence, mask_prob: float, rng_seed: int, vocab_size: int
):
    """Select content positions independently with mask_prob; corrupt each.

    Of the selected positions 80% become MASK, 10% a random vocabulary
    token, 10% keep their surface. Returns the corrupted sequence plus
    (position, original_id) targets for every selected position.
    """
    if not 0.0 <= mask_prob < 1.0:
        raise UsageError("mask_prob must lie in [0, 1)")
    if vocab_size <= len(RESERVED_TOKENS):
        raise UsageError("vocab_size leaves no sampleable tokens")

    rng = np.random.default_rng(rng_seed)
    ids = list(seq.ids)
    targets = []
    for pos in seq.content_positions:
        if rng.random() >= mask_prob:
            continue
        original = ids[pos]
        action = rng.random()
        if action < 0.8:
            ids[pos] = MASK_ID
        elif action < 0.9:
            ids[pos] = int(rng.integers(len(RESERVED_TOKENS), vocab_size))
        targets.append((pos, original))
    corrupted = TokenSequence(
        ids=tuple(ids),
        attention_mask=seq.attention_mask,
        original_length=seq.original_length,
    )
    return corrupted, targets


def apply_tsdae_noise(
    seq: TokenSequence, noise_ratio: float, rng_seed: int
) -> TokenSequence:
    """Replace exactly round(noise_ratio * content_length) content tokens by MASK.

    The count rounds half up so a 0.5 fraction of an even count is exact.
    Positions are drawn uniformly without replacement.
    """
    if not 0.0 <= noise_ratio <= 1.0:
        raise UsageError("noise_ratio must lie in [0, 1]")

    eligible = seq.content_positions
    count = int(math.floor(noise_ratio * len(eligible) + 0.5))
    if count == 0:
        return seq
    rng = np.random.default_rng(rng_seed)
    chosen = rng.choice(len(eligible), size=count, replace=False)
    ids = list(seq.ids)
    for k in chosen:
        ids[eligible[int(k)]] = MASK_ID
    return TokenSequence(
        ids=tuple(ids),
        attention_mask=seq.attention_mask,
        original_length=seq.original_length,
    )
