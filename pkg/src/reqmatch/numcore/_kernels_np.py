"""Pure NumPy kernel implementations.

Reference backend for the compiled extension in ``_kernels_cy``: same
signatures, same math. Everything operates on 2-D C-contiguous arrays
(rows x features); wrappers in ``kernels`` handle reshaping. These
functions also serve the float64 shadow mode, which never dispatches to
the compiled kernels.
"""

import numpy as np
from scipy.special import erf

_INV_SQRT2 = 0.7071067811865476
_INV_SQRT2PI = 0.3989422804014327


def gelu_fwd(x):
    return (0.5 * x * (1.0 + erf(x * _INV_SQRT2))).astype(x.dtype, copy=False)


def gelu_bwd(x, gy):
    cdf = 0.5 * (1.0 + erf(x * _INV_SQRT2))
    pdf = _INV_SQRT2PI * np.exp(-0.5 * x * x)
    return (gy * (cdf + x * pdf)).astype(x.dtype, copy=False)


def softmax_rows_fwd(x):
    m = x.max(axis=1, keepdims=True)
    e = np.exp(x - m)
    return e / e.sum(axis=1, keepdims=True)


def softmax_rows_bwd(y, gy):
    dot = (y * gy).sum(axis=1, keepdims=True)
    return y * (gy - dot)


def layer_norm_fwd(x, gain, bias, eps):
    mean = x.mean(axis=1, keepdims=True)
    centered = x - mean
    var = (centered * centered).mean(axis=1)
    rstd = 1.0 / np.sqrt(var + eps)
    xhat = centered * rstd[:, None]
    y = xhat * gain + bias
    return y.astype(x.dtype, copy=False), mean[:, 0], rstd.astype(x.dtype, copy=False)


def layer_norm_bwd(x, gain, mean, rstd, gy):
    n = x.shape[1]
    xhat = (x - mean[:, None]) * rstd[:, None]
    g = gy * gain
    g_mean = g.mean(axis=1, keepdims=True)
    gx_mean = (g * xhat).mean(axis=1, keepdims=True)
    gx = (g - g_mean - xhat * gx_mean) * rstd[:, None]
    ggain = (gy * xhat).sum(axis=0)
    gbias = gy.sum(axis=0)
    return gx.astype(x.dtype, copy=False), ggain, gbias


def adam_update(param, grad, m, v, step, lr, beta1, beta2, eps):
    # step is the post-increment count (1 on the first call)
    m *= beta1
    m += (1.0 - beta1) * grad
    v *= beta2
    v += (1.0 - beta2) * (grad * grad)
    mhat = m / (1.0 - beta1**step)
    vhat = v / (1.0 - beta2**step)
    param -= lr * mhat / (np.sqrt(vhat) + eps)
