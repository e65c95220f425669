"""Dense tensors and the reverse-mode tape.

A Tensor wraps a C-order (row-major) NumPy array, float32 by default;
float64 is the shadow mode that gradient-check tests run in. Tensors
produced by operations record their parents and a local gradient rule;
``ComputeGraph.trace`` linearizes the DAG reachable from a tensor into
topological order, and ``backward`` walks it once in reverse, summing
gradients additively across fan-out.

Tensors are treated as immutable once they participate in a graph; only
the optimizer mutates parameter data, between graphs.
"""

from __future__ import annotations

import numpy as np

from ..errors import ShapeError, UsageError

DEFAULT_DTYPE = np.float32


class Tensor:
    __slots__ = ("data", "grad", "requires_grad", "op", "_parents", "_backward")

    def __init__(self, data, requires_grad: bool = False, *, _op: str | None = None,
                 _parents: tuple = (), _backward=None):
        self.data = data
        self.grad = None
        self.requires_grad = requires_grad
        self.op = _op
        self._parents = _parents
        self._backward = _backward

    @property
    def shape(self) -> tuple:
        return self.data.shape

    @property
    def dtype(self):
        return self.data.dtype

    def __repr__(self):
        op = f", op={self.op}" if self.op else ""
        return f"Tensor(shape={self.shape}, dtype={self.data.dtype.name}{op})"

    def backward(self) -> "ComputeGraph":
        """Trace from this scalar and run the backward pass."""
        graph = ComputeGraph.trace(self)
        backward(graph, self)
        return graph


def tensor(data, requires_grad: bool = False, dtype=None) -> Tensor:
    """Commit external data as a leaf tensor; rejects non-finite values."""
    arr = np.ascontiguousarray(data, dtype=dtype or DEFAULT_DTYPE)
    if not np.all(np.isfinite(arr)):
        raise UsageError("tensor data contains NaN or Inf")
    return Tensor(arr, requires_grad=requires_grad)


def zeros(shape, requires_grad: bool = False, dtype=None) -> Tensor:
    return Tensor(np.zeros(shape, dtype=dtype or DEFAULT_DTYPE), requires_grad=requires_grad)


def ones(shape, requires_grad: bool = False, dtype=None) -> Tensor:
    return Tensor(np.ones(shape, dtype=dtype or DEFAULT_DTYPE), requires_grad=requires_grad)


def result(data, parents: tuple, op: str, backward_fn) -> Tensor:
    """Build an op-output tensor; the gradient rule is kept only if needed."""
    req = any(p.requires_grad for p in parents)
    return Tensor(data, requires_grad=req, _op=op,
                  _parents=parents if req else (), _backward=backward_fn if req else None)


class ComputeGraph:
    """Topologically ordered operation records reachable from one root."""

    def __init__(self, nodes: list[Tensor]):
        self.nodes = nodes

    @classmethod
    def trace(cls, root: Tensor) -> "ComputeGraph":
        nodes: list[Tensor] = []
        seen: set[int] = set()
        stack: list[tuple[Tensor, bool]] = [(root, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                nodes.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            for p in node._parents:
                if id(p) not in seen:
                    stack.append((p, False))
        return cls(nodes)

    def __len__(self):
        return len(self.nodes)


def backward(graph: ComputeGraph, loss: Tensor) -> None:
    """Populate .grad with d(loss)/d(tensor) for every requires_grad tensor.

    Gradients accumulate additively where a tensor fans out into several
    consumers. Each node's rule runs exactly once.
    """
    if loss.data.shape != ():
        raise UsageError(f"backward needs a scalar loss, got shape {loss.data.shape}")
    if not graph.nodes or graph.nodes[-1] is not loss:
        raise UsageError("loss is not the root of the traced graph")
    loss.grad = np.ones((), dtype=loss.data.dtype)
    for node in reversed(graph.nodes):
        if node._backward is None or node.grad is None:
            continue
        grads = node._backward(node.grad)
        for parent, g in zip(node._parents, grads):
            if g is None or not parent.requires_grad:
                continue
            if parent.grad is None:
                parent.grad = g
            else:
                parent.grad = parent.grad + g


def zero_grads(params) -> None:
    for p in params:
        p.grad = None


def unbroadcast(g: np.ndarray, shape: tuple) -> np.ndarray:
    """Sum a gradient back down to the shape it was broadcast from."""
    if g.shape == shape:
        return g
    extra = g.ndim - len(shape)
    if extra > 0:
        g = g.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, n in enumerate(shape) if n == 1 and g.shape[i] > 1)
    if axes:
        g = g.sum(axis=axes, keepdims=True)
    return g


def check_shapes_match(a: Tensor, b: Tensor, op: str) -> None:
    try:
        np.broadcast_shapes(a.shape, b.shape)
    except ValueError:
        raise ShapeError(f"{op}: shapes {a.shape} and {b.shape} do not broadcast")
