"""Contrastive objectives over in-batch similarity matrices.

Both contrastive stages score every left embedding against every right
embedding; row i's positive sits on the diagonal and the other N-1 columns
act as negatives. The loss is symmetric: rows rank columns and columns
rank rows, averaged. With identical inputs on both sides every score ties
and the loss collapses to ln(N), a closed form the tests pin.
"""

from __future__ import annotations

import numpy as np

from ..errors import UsageError
from ..numcore import Tensor, ops


def similarity_matrix(za: Tensor, zb: Tensor, temperature: float) -> Tensor:
    """Temperature-scaled cosine matrix of two row-normalized [N,H] tensors."""
    if temperature <= 0.0:
        raise UsageError(f"temperature must be > 0, got {temperature}")
    if za.shape != zb.shape or len(za.shape) != 2:
        raise UsageError(f"expected matching [N,H] inputs, got {za.shape} and {zb.shape}")
    return ops.scale(ops.matmul(za, ops.transpose(zb)), 1.0 / temperature)


def infonce_symmetric(sim: Tensor) -> Tensor:
    """Mean of row-wise and column-wise cross-entropy with diagonal targets."""
    n = sim.shape[0]
    if len(sim.shape) != 2 or sim.shape[1] != n:
        raise UsageError(f"similarity matrix must be square, got {sim.shape}")
    if n < 2:
        raise UsageError("in-batch negatives do not exist in a batch of one")
    targets = np.arange(n)
    row_loss = ops.cross_entropy_rows(sim, targets)
    col_loss = ops.cross_entropy_rows(ops.transpose(sim), targets)
    return ops.scale(ops.add(row_loss, col_loss), 0.5)


def cross_pair_infonce(ha: Tensor, hb: Tensor, temperature: float) -> Tensor:
    """Full contrastive loss from raw pooled embeddings (not yet normalized)."""
    za = ops.l2_normalize_rows(ha)
    zb = ops.l2_normalize_rows(hb)
    return infonce_symmetric(similarity_matrix(za, zb, temperature))
