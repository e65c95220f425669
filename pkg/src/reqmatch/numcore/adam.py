"""Adam optimizer with bias correction, applied in place."""

from __future__ import annotations

import numpy as np

from ..errors import ShapeError
from . import kernels
from .tensor import Tensor


class AdamState:
    """Per-parameter first/second moments plus the shared step counter."""

    def __init__(self, params: list[Tensor], learning_rate: float = 1e-3,
                 beta1: float = 0.9, beta2: float = 0.999, epsilon: float = 1e-8):
        self.step = 0
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.first_moment = [np.zeros_like(p.data) for p in params]
        self.second_moment = [np.zeros_like(p.data) for p in params]


def adam_step(params: list[Tensor], grads: list[np.ndarray], state: AdamState) -> None:
    """One bias-corrected update; parameters with a None grad are skipped."""
    if len(params) != len(state.first_moment):
        raise ShapeError("adam_step: params do not match optimizer state")
    state.step += 1
    for i, (p, g) in enumerate(zip(params, grads)):
        if g is None:
            continue
        if g.shape != p.data.shape:
            raise ShapeError(f"adam_step: grad shape {g.shape} != param shape {p.data.shape}")
        kernels.adam_update(
            p.data, g.astype(p.data.dtype, copy=False),
            state.first_moment[i], state.second_moment[i],
            state.step, state.learning_rate, state.beta1, state.beta2, state.epsilon,
        )
