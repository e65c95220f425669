# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled float32 kernels: fused elementwise/reduction loops.

Twin of _kernels_np with identical signatures, restricted to float32.
One pass per row, no temporaries.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport erff, expf, sqrtf, sqrt, pow

cnp.import_array()

cdef float INV_SQRT2 = 0.7071067811865476
cdef float INV_SQRT2PI = 0.3989422804014327


def gelu_fwd(cnp.ndarray[cnp.float32_t, ndim=2] x):
    cdef Py_ssize_t n = x.shape[0], d = x.shape[1], i, j
    cdef cnp.ndarray[cnp.float32_t, ndim=2] y = np.empty_like(x)
    cdef float v
    for i in range(n):
        for j in range(d):
            v = x[i, j]
            y[i, j] = 0.5 * v * (1.0 + erff(v * INV_SQRT2))
    return y


def gelu_bwd(cnp.ndarray[cnp.float32_t, ndim=2] x,
             cnp.ndarray[cnp.float32_t, ndim=2] gy):
    cdef Py_ssize_t n = x.shape[0], d = x.shape[1], i, j
    cdef cnp.ndarray[cnp.float32_t, ndim=2] gx = np.empty_like(x)
    cdef float v, cdf, pdf
    for i in range(n):
        for j in range(d):
            v = x[i, j]
            cdf = 0.5 * (1.0 + erff(v * INV_SQRT2))
            pdf = INV_SQRT2PI * expf(-0.5 * v * v)
            gx[i, j] = gy[i, j] * (cdf + v * pdf)
    return gx


def softmax_rows_fwd(cnp.ndarray[cnp.float32_t, ndim=2] x):
    cdef Py_ssize_t n = x.shape[0], d = x.shape[1], i, j
    cdef cnp.ndarray[cnp.float32_t, ndim=2] y = np.empty_like(x)
    cdef float m, s
    for i in range(n):
        m = x[i, 0]
        for j in range(1, d):
            if x[i, j] > m:
                m = x[i, j]
        s = 0.0
        for j in range(d):
            y[i, j] = expf(x[i, j] - m)
            s += y[i, j]
        for j in range(d):
            y[i, j] /= s
    return y


def softmax_rows_bwd(cnp.ndarray[cnp.float32_t, ndim=2] y,
                     cnp.ndarray[cnp.float32_t, ndim=2] gy):
    cdef Py_ssize_t n = y.shape[0], d = y.shape[1], i, j
    cdef cnp.ndarray[cnp.float32_t, ndim=2] gx = np.empty_like(y)
    cdef float dot
    for i in range(n):
        dot = 0.0
        for j in range(d):
            dot += y[i, j] * gy[i, j]
        for j in range(d):
            gx[i, j] = y[i, j] * (gy[i, j] - dot)
    return gx


def layer_norm_fwd(cnp.ndarray[cnp.float32_t, ndim=2] x,
                   cnp.ndarray[cnp.float32_t, ndim=1] gain,
                   cnp.ndarray[cnp.float32_t, ndim=1] bias,
                   float eps):
    cdef Py_ssize_t n = x.shape[0], d = x.shape[1], i, j
    cdef cnp.ndarray[cnp.float32_t, ndim=2] y = np.empty_like(x)
    cdef cnp.ndarray[cnp.float32_t, ndim=1] mean = np.empty(n, dtype=np.float32)
    cdef cnp.ndarray[cnp.float32_t, ndim=1] rstd = np.empty(n, dtype=np.float32)
    cdef float mu, var, c, r
    for i in range(n):
        mu = 0.0
        for j in range(d):
            mu += x[i, j]
        mu /= d
        var = 0.0
        for j in range(d):
            c = x[i, j] - mu
            var += c * c
        var /= d
        r = 1.0 / sqrtf(var + eps)
        mean[i] = mu
        rstd[i] = r
        for j in range(d):
            y[i, j] = (x[i, j] - mu) * r * gain[j] + bias[j]
    return y, mean, rstd


def layer_norm_bwd(cnp.ndarray[cnp.float32_t, ndim=2] x,
                   cnp.ndarray[cnp.float32_t, ndim=1] gain,
                   cnp.ndarray[cnp.float32_t, ndim=1] mean,
                   cnp.ndarray[cnp.float32_t, ndim=1] rstd,
                   cnp.ndarray[cnp.float32_t, ndim=2] gy):
    cdef Py_ssize_t n = x.shape[0], d = x.shape[1], i, j
    cdef cnp.ndarray[cnp.float32_t, ndim=2] gx = np.empty_like(x)
    cdef cnp.ndarray[cnp.float32_t, ndim=1] ggain = np.zeros(x.shape[1], dtype=np.float32)
    cdef cnp.ndarray[cnp.float32_t, ndim=1] gbias = np.zeros(x.shape[1], dtype=np.float32)
    cdef float g_mean, gx_mean, xh, g
    for i in range(n):
        g_mean = 0.0
        gx_mean = 0.0
        for j in range(d):
            xh = (x[i, j] - mean[i]) * rstd[i]
            g = gy[i, j] * gain[j]
            g_mean += g
            gx_mean += g * xh
            ggain[j] += gy[i, j] * xh
            gbias[j] += gy[i, j]
        g_mean /= d
        gx_mean /= d
        for j in range(d):
            xh = (x[i, j] - mean[i]) * rstd[i]
            g = gy[i, j] * gain[j]
            gx[i, j] = (g - g_mean - xh * gx_mean) * rstd[i]
    return gx, ggain, gbias


def adam_update(cnp.ndarray[cnp.float32_t, ndim=1] param,
                cnp.ndarray[cnp.float32_t, ndim=1] grad,
                cnp.ndarray[cnp.float32_t, ndim=1] m,
                cnp.ndarray[cnp.float32_t, ndim=1] v,
                long step, float lr, float beta1, float beta2, float eps):
    cdef Py_ssize_t n = param.shape[0], i
    cdef float bc1 = 1.0 - <float>pow(beta1, step)
    cdef float bc2 = 1.0 - <float>pow(beta2, step)
    cdef float g, mhat, vhat
    for i in range(n):
        g = grad[i]
        m[i] = beta1 * m[i] + (1.0 - beta1) * g
        v[i] = beta2 * v[i] + (1.0 - beta2) * g * g
        mhat = m[i] / bc1
        vhat = v[i] / bc2
        param[i] -= lr * mhat / (sqrtf(vhat) + eps)
