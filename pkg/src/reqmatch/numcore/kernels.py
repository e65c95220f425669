"""Kernel backend selection.

The hot elementwise/reduction kernels exist twice: a compiled Cython
extension (``_kernels_cy``) and a NumPy twin (``_kernels_np``). The
backend is chosen once at import time from the REQMATCH_KERNELS
environment variable:

    auto    use the compiled extension if importable, else NumPy (default)
    cython  require the compiled extension, fail loudly if missing
    numpy   force the NumPy fallback

The compiled kernels are float32-only; float64 arrays (the shadow mode
used by gradient checks) always take the NumPy path. Matrix products are
not here at all -- they go through BLAS via ``numpy.matmul`` in both
backends.
"""

import os

import numpy as np

from . import _kernels_np

_choice = os.environ.get("REQMATCH_KERNELS", "auto").lower()
if _choice not in ("auto", "cython", "numpy"):
    raise ValueError(f"REQMATCH_KERNELS must be auto|cython|numpy, got {_choice!r}")

_compiled = None
if _choice in ("auto", "cython"):
    try:
        from . import _kernels_cy as _compiled
    except ImportError:
        if _choice == "cython":
            raise ImportError(
                "REQMATCH_KERNELS=cython but the compiled extension is not "
                "built; run `pip install -e . --no-build-isolation`"
            )

BACKEND = "cython" if _compiled is not None else "numpy"


def _pick(x):
    if _compiled is not None and x.dtype == np.float32:
        return _compiled
    return _kernels_np


def _rows(x):
    # kernels want 2-D contiguous (rows x features)
    return np.ascontiguousarray(x.reshape(-1, x.shape[-1]))


def gelu_fwd(x):
    return _pick(x).gelu_fwd(_rows(x)).reshape(x.shape)


def gelu_bwd(x, gy):
    return _pick(x).gelu_bwd(_rows(x), _rows(gy)).reshape(x.shape)


def softmax_rows_fwd(x):
    return _pick(x).softmax_rows_fwd(_rows(x)).reshape(x.shape)


def softmax_rows_bwd(y, gy):
    return _pick(y).softmax_rows_bwd(_rows(y), _rows(gy)).reshape(y.shape)


def layer_norm_fwd(x, gain, bias, eps):
    y, mean, rstd = _pick(x).layer_norm_fwd(_rows(x), gain, bias, eps)
    return y.reshape(x.shape), mean, rstd


def layer_norm_bwd(x, gain, mean, rstd, gy):
    gx, ggain, gbias = _pick(x).layer_norm_bwd(_rows(x), gain, mean, rstd, _rows(gy))
    return gx.reshape(x.shape), ggain, gbias


def adam_update(param, grad, m, v, step, lr, beta1, beta2, eps):
    impl = _pick(param)
    if impl is _kernels_np:
        impl.adam_update(param, grad, m, v, step, lr, beta1, beta2, eps)
    else:
        impl.adam_update(
            param.reshape(-1), np.ascontiguousarray(grad.reshape(-1)),
            m.reshape(-1), v.reshape(-1), step, lr, beta1, beta2, eps,
        )
