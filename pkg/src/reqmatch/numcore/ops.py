"""Differentiable operations over Tensors.

Every op computes eagerly on the wrapped NumPy arrays and registers a
local gradient rule. Rules return one gradient per parent (None where a
parent cannot need one). The fused kernels live in ``kernels``; matmul
goes straight to BLAS.
"""

from __future__ import annotations

import numpy as np

from ..errors import ShapeError, UsageError
from . import kernels
from .tensor import Tensor, check_shapes_match, result, unbroadcast


def add(a: Tensor, b: Tensor) -> Tensor:
    check_shapes_match(a, b, "add")
    out = a.data + b.data

    def bwd(gy):
        return unbroadcast(gy, a.shape), unbroadcast(gy, b.shape)

    return result(out, (a, b), "add", bwd)


def sub(a: Tensor, b: Tensor) -> Tensor:
    check_shapes_match(a, b, "sub")
    out = a.data - b.data

    def bwd(gy):
        return unbroadcast(gy, a.shape), unbroadcast(-gy, b.shape)

    return result(out, (a, b), "sub", bwd)


def mul(a: Tensor, b: Tensor) -> Tensor:
    check_shapes_match(a, b, "mul")
    out = a.data * b.data

    def bwd(gy):
        return unbroadcast(gy * b.data, a.shape), unbroadcast(gy * a.data, b.shape)

    return result(out, (a, b), "mul", bwd)


def scale(a: Tensor, c: float) -> Tensor:
    out = a.data * a.data.dtype.type(c)

    def bwd(gy):
        return (gy * a.data.dtype.type(c),)

    return result(out, (a,), "scale", bwd)


def matmul(a: Tensor, b: Tensor) -> Tensor:
    """Matrix product; ranks above 2 batch over leading dimensions."""
    if a.data.ndim < 2 or b.data.ndim < 2:
        raise ShapeError(f"matmul needs rank >= 2, got {a.shape} @ {b.shape}")
    if a.shape[-1] != b.shape[-2]:
        raise ShapeError(f"matmul inner dims disagree: {a.shape} @ {b.shape}")
    try:
        out = a.data @ b.data
    except ValueError as e:
        raise ShapeError(f"matmul: {e}")

    def bwd(gy):
        ga = unbroadcast(gy @ b.data.swapaxes(-1, -2), a.shape)
        gb = unbroadcast(a.data.swapaxes(-1, -2) @ gy, b.shape)
        return ga, gb

    return result(out, (a, b), "matmul", bwd)


def transpose(a: Tensor, axes: tuple | None = None) -> Tensor:
    if axes is None:
        axes = tuple(range(a.data.ndim - 2)) + (a.data.ndim - 1, a.data.ndim - 2)
    inv = tuple(np.argsort(axes))
    out = np.ascontiguousarray(a.data.transpose(axes))

    def bwd(gy):
        return (np.ascontiguousarray(gy.transpose(inv)),)

    return result(out, (a,), "transpose", bwd)


def reshape(a: Tensor, shape: tuple) -> Tensor:
    old = a.shape
    out = a.data.reshape(shape)

    def bwd(gy):
        return (gy.reshape(old),)

    return result(out, (a,), "reshape", bwd)


def embedding(table: Tensor, ids: np.ndarray) -> Tensor:
    """Row gather by integer id; backward scatter-adds into the table."""
    if ids.size and (ids.min() < 0 or ids.max() >= table.shape[0]):
        raise UsageError(f"embedding id out of range for table of {table.shape[0]} rows")
    out = table.data[ids]

    def bwd(gy):
        g = np.zeros_like(table.data)
        np.add.at(g, ids.reshape(-1), gy.reshape(-1, table.shape[1]))
        return (g,)

    return result(out, (table,), "embedding", bwd)


def take_rows(x: Tensor, idx: np.ndarray) -> Tensor:
    if x.data.ndim != 2:
        raise ShapeError("take_rows expects a rank-2 tensor")
    out = x.data[idx]

    def bwd(gy):
        g = np.zeros_like(x.data)
        np.add.at(g, idx, gy)
        return (g,)

    return result(out, (x,), "take_rows", bwd)


def gelu(x: Tensor) -> Tensor:
    out = kernels.gelu_fwd(x.data)

    def bwd(gy):
        return (kernels.gelu_bwd(x.data, gy),)

    return result(out, (x,), "gelu", bwd)


def softmax_rows(x: Tensor) -> Tensor:
    """Row-stochastic softmax over the last axis, max-shifted for stability."""
    if not np.all(np.isfinite(x.data)):
        raise UsageError("softmax_rows: non-finite input")
    y = kernels.softmax_rows_fwd(x.data)

    def bwd(gy):
        return (kernels.softmax_rows_bwd(y, gy),)

    return result(y, (x,), "softmax_rows", bwd)


def layer_norm(x: Tensor, gain: Tensor, bias: Tensor, eps: float = 1e-5) -> Tensor:
    if eps <= 0:
        raise UsageError("layer_norm eps must be > 0")
    n = x.shape[-1]
    if gain.shape != (n,) or bias.shape != (n,):
        raise ShapeError(f"layer_norm gain/bias must be ({n},)")
    y, mean, rstd = kernels.layer_norm_fwd(x.data, gain.data, bias.data, eps)

    def bwd(gy):
        gx, ggain, gbias = kernels.layer_norm_bwd(x.data, gain.data, mean, rstd, gy)
        return gx, ggain, gbias

    return result(y, (x, gain, bias), "layer_norm", bwd)


def dropout(x: Tensor, p: float, rng: np.random.Generator) -> Tensor:
    """Inverted dropout; pure function of (x, p, rng state)."""
    if not 0.0 <= p < 1.0:
        raise UsageError(f"dropout prob must be in [0,1), got {p}")
    if p == 0.0:
        return x
    keep = (rng.random(x.shape) >= p).astype(x.data.dtype)
    keep /= x.data.dtype.type(1.0 - p)
    out = x.data * keep

    def bwd(gy):
        return (gy * keep,)

    return result(out, (x,), "dropout", bwd)


def masked_mean(x: Tensor, mask: np.ndarray) -> Tensor:
    """Mean over the second-to-last axis, restricted to mask==1 positions."""
    if mask.shape != x.shape[:-1]:
        raise ShapeError(f"mask shape {mask.shape} must match {x.shape[:-1]}")
    m = mask.astype(x.data.dtype)
    counts = m.sum(axis=-1)
    if np.any(counts == 0):
        raise UsageError("masked_mean: a row has no unmasked positions")
    weights = m / counts[..., None]
    out = (x.data * weights[..., None]).sum(axis=-2)

    def bwd(gy):
        return (gy[..., None, :] * weights[..., None],)

    return result(out, (x,), "masked_mean", bwd)


def l2_normalize_rows(x: Tensor, min_norm: float = 1e-12) -> Tensor:
    if x.data.ndim != 2:
        raise ShapeError("l2_normalize_rows expects a rank-2 tensor")
    norms = np.sqrt((x.data * x.data).sum(axis=1))
    if np.any(norms <= min_norm):
        raise UsageError("l2_normalize_rows: zero row")
    y = x.data / norms[:, None]

    def bwd(gy):
        dot = (gy * y).sum(axis=1, keepdims=True)
        return ((gy - y * dot) / norms[:, None],)

    return result(y, (x,), "l2_normalize_rows", bwd)


def cross_entropy_rows(logits: Tensor, targets: np.ndarray) -> Tensor:
    """Mean softmax cross-entropy of each row against its target class."""
    if logits.data.ndim != 2:
        raise ShapeError("cross_entropy_rows expects rank-2 logits")
    n, c = logits.shape
    if targets.shape != (n,):
        raise ShapeError(f"targets must have shape ({n},)")
    if targets.size and (targets.min() < 0 or targets.max() >= c):
        raise UsageError("cross_entropy_rows: target class out of range")
    x = logits.data
    m = x.max(axis=1)
    lse = m + np.log(np.exp(x - m[:, None]).sum(axis=1))
    picked = x[np.arange(n), targets]
    out = np.asarray((lse - picked).mean(), dtype=x.dtype)

    def bwd(gy):
        g = kernels.softmax_rows_fwd(x).copy()
        g[np.arange(n), targets] -= 1.0
        g *= gy / x.dtype.type(n)
        return (g,)

    return result(out, (logits,), "cross_entropy_rows", bwd)


def sum_all(x: Tensor) -> Tensor:
    out = np.asarray(x.data.sum(), dtype=x.data.dtype)

    def bwd(gy):
        return (np.broadcast_to(gy, x.shape).astype(x.data.dtype),)

    return result(out, (x,), "sum_all", bwd)


def mean_all(x: Tensor) -> Tensor:
    n = x.data.size
    out = np.asarray(x.data.mean(), dtype=x.data.dtype)

    def bwd(gy):
        g = np.broadcast_to(gy / x.data.dtype.type(n), x.shape).astype(x.data.dtype)
        return (g,)

    return result(out, (x,), "mean_all", bwd)
