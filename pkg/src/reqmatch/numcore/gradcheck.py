"""Finite-difference verification of analytic gradients.

Runs entirely in the float64 shadow mode: the caller builds parameters
with dtype=float64 and a loss closure that re-traces the graph on every
call. Central differences with h=1e-4; comparison is per-element
|a - n| <= rtol * max(|a|, |n|) + atol, the atol floor covering the
~1e-8 absolute noise floor of central differences.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .tensor import ComputeGraph, Tensor, backward, zero_grads


def numeric_gradient(loss_fn: Callable[[], Tensor], param: Tensor, h: float = 1e-4) -> np.ndarray:
    g = np.zeros_like(param.data)
    flat = param.data.reshape(-1)
    gflat = g.reshape(-1)
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + h
        up = float(loss_fn().data)
        flat[i] = orig - h
        down = float(loss_fn().data)
        flat[i] = orig
        gflat[i] = (up - down) / (2.0 * h)
    return g


def max_gradient_error(loss_fn: Callable[[], Tensor], params: list[Tensor],
                       h: float = 1e-4, rtol: float = 1e-4, atol: float = 1e-7) -> float:
    """Largest scaled mismatch between analytic and numeric gradients.

    Returns max over all parameter elements of
    |a - n| / (rtol * max(|a|, |n|) + atol); values <= 1 pass.
    """
    zero_grads(params)
    loss = loss_fn()
    backward(ComputeGraph.trace(loss), loss)
    worst = 0.0
    for p in params:
        analytic = p.grad if p.grad is not None else np.zeros_like(p.data)
        numeric = numeric_gradient(loss_fn, p, h=h)
        denom = rtol * np.maximum(np.abs(analytic), np.abs(numeric)) + atol
        worst = max(worst, float((np.abs(analytic - numeric) / denom).max()))
    return worst
