"""Dense tensors, reverse-mode autodiff, and the Adam optimizer."""

from .adam import AdamState, adam_step
from .kernels import BACKEND
from .ops import (
    add,
    cross_entropy_rows,
    dropout,
    embedding,
    gelu,
    l2_normalize_rows,
    layer_norm,
    masked_mean,
    matmul,
    mean_all,
    mul,
    reshape,
    scale,
    softmax_rows,
    sub,
    sum_all,
    take_rows,
    transpose,
)
from .serialize import read_named_tensors, read_tensor, write_named_tensors, write_tensor
from .tensor import ComputeGraph, Tensor, backward, ones, tensor, zero_grads, zeros

__all__ = [
    "AdamState", "adam_step", "BACKEND",
    "add", "cross_entropy_rows", "dropout", "embedding", "gelu",
    "l2_normalize_rows", "layer_norm", "masked_mean", "matmul", "mean_all",
    "mul", "reshape", "scale", "softmax_rows", "sub", "sum_all", "take_rows",
    "transpose",
    "read_named_tensors", "read_tensor", "write_named_tensors", "write_tensor",
    "ComputeGraph", "Tensor", "backward", "ones", "tensor", "zero_grads", "zeros",
]
