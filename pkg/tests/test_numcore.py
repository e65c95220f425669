import numpy as np
import pytest

from reqmatch import numcore as nc
from reqmatch.errors import ShapeError, UsageError
from reqmatch.numcore.gradcheck import max_gradient_error
from reqmatch.numcore import ops


def t64(data, requires_grad=True):
    return nc.tensor(data, requires_grad=requires_grad, dtype=np.float64)


def test_tensor_rejects_nonfinite():
    with pytest.raises(UsageError):
        nc.tensor([1.0, np.nan])
    with pytest.raises(UsageError):
        nc.tensor([np.inf])


def test_tensor_flat_storage_is_row_major():
    t = nc.tensor([[1.0, 2.0], [3.0, 4.0]])
    assert t.data.flags["C_CONTIGUOUS"]
    assert t.data.ravel().tolist() == [1.0, 2.0, 3.0, 4.0]
    assert t.data.size == int(np.prod(t.shape))


# --- matmul -----------------------------------------------------------------

def naive_matmul(a, b):
    m, k = a.shape
    k2, n = b.shape
    out = np.zeros((m, n))
    for i in range(m):
        for j in range(n):
            for l in range(k):
                out[i, j] += a[i, l] * b[l, j]
    return out


def test_matmul_identity():
    eye = nc.tensor(np.eye(2))
    x = nc.tensor([[3.0, 4.0], [5.0, 6.0]])
    assert np.allclose(nc.matmul(eye, x).data, x.data)


def test_matmul_against_triple_loop():
    assert np.allclose(
        nc.matmul(nc.tensor([[1.0, 2.0]]), nc.tensor([[3.0], [4.0]])).data, [[11.0]]
    )
    rng = np.random.default_rng(0)
    for _ in range(10):
        a = rng.uniform(-1, 1, size=(3, 4))
        b = rng.uniform(-1, 1, size=(4, 5))
        got = nc.matmul(nc.tensor(a, dtype=np.float64), nc.tensor(b, dtype=np.float64)).data
        assert np.allclose(got, naive_matmul(a, b), atol=1e-12)


def test_matmul_zeros_annihilate():
    z = nc.zeros((2, 3))
    b = nc.tensor(np.random.default_rng(1).normal(size=(3, 4)))
    assert np.array_equal(nc.matmul(z, b).data, np.zeros((2, 4)))


def test_matmul_shape_error():
    with pytest.raises(ShapeError):
        nc.matmul(nc.zeros((2, 3)), nc.zeros((2, 3)))


# --- softmax ----------------------------------------------------------------

def test_softmax_symmetry_and_overflow():
    assert np.allclose(nc.softmax_rows(nc.tensor([[0.0, 0.0]])).data, [[0.5, 0.5]])
    big = nc.softmax_rows(nc.tensor([[1000.0, 1000.0]]))
    assert np.allclose(big.data, [[0.5, 0.5]])
    assert np.all(np.isfinite(big.data))


def test_softmax_closed_form():
    got = nc.softmax_rows(nc.tensor([[0.0, np.log(3.0)]])).data
    assert np.allclose(got, [[0.25, 0.75]], atol=1e-6)


def test_softmax_rows_sum_to_one_and_shift_invariant():
    rng = np.random.default_rng(7)
    for _ in range(20):
        x = rng.uniform(-5, 5, size=(4, 9)).astype(np.float32)
        y = nc.softmax_rows(nc.tensor(x)).data
        assert np.allclose(y.sum(axis=1), 1.0, atol=1e-6)
        y2 = nc.softmax_rows(nc.tensor(x + 3.25)).data
        assert np.allclose(y, y2, atol=1e-6)


# --- layer norm -------------------------------------------------------------

def test_layer_norm_constant_row_is_zero():
    x = nc.tensor(np.full((1, 8), 5.0))
    g, b = nc.ones((8,)), nc.zeros((8,))
    assert np.allclose(nc.layer_norm(x, g, b, eps=1e-5).data, 0.0, atol=1e-5)


def test_layer_norm_closed_form_pair():
    x = nc.tensor([[1.0, 3.0]], dtype=np.float64)
    g = nc.ones((2,), dtype=np.float64)
    b = nc.zeros((2,), dtype=np.float64)
    got = nc.layer_norm(x, g, b, eps=1e-12).data
    assert np.allclose(got, [[-1.0, 1.0]], atol=1e-5)


def test_layer_norm_zero_gain_returns_bias():
    x = nc.tensor(np.random.default_rng(3).normal(size=(4, 8)))
    g = nc.zeros((8,))
    b = nc.tensor(np.arange(8, dtype=np.float32))
    got = nc.layer_norm(x, g, b).data
    assert np.allclose(got, np.broadcast_to(b.data, (4, 8)))


def test_layer_norm_row_stats():
    rng = np.random.default_rng(11)
    x = nc.tensor(rng.normal(size=(6, 16)))
    y = nc.layer_norm(x, nc.ones((16,)), nc.zeros((16,)), eps=1e-6).data
    assert np.allclose(y.mean(axis=1), 0.0, atol=1e-5)
    assert np.allclose(y.var(axis=1), 1.0, atol=1e-3)


def test_layer_norm_eps_must_be_positive():
    with pytest.raises(UsageError):
        nc.layer_norm(nc.zeros((1, 4)), nc.ones((4,)), nc.zeros((4,)), eps=0.0)


# --- backward ---------------------------------------------------------------

def test_backward_sum_gives_ones():
    x = nc.tensor(np.random.default_rng(0).normal(size=(3, 4)), requires_grad=True)
    nc.sum_all(x).backward()
    assert np.array_equal(x.grad, np.ones((3, 4), dtype=np.float32))


def test_backward_dot_square():
    x = nc.tensor([[1.0, 2.0]], requires_grad=True)
    loss = nc.sum_all(nc.mul(x, x))
    loss.backward()
    assert np.allclose(x.grad, [[2.0, 4.0]])


def test_backward_requires_scalar():
    x = nc.tensor([[1.0, 2.0]], requires_grad=True)
    y = nc.mul(x, x)
    with pytest.raises(UsageError):
        nc.backward(nc.ComputeGraph.trace(y), y)


def test_backward_diamond_fanout_accumulates():
    # loss = sum(x*x) + sum(x) shares x via two paths
    x = nc.tensor([1.0, -2.0, 3.0], requires_grad=True)
    loss = nc.add(nc.sum_all(nc.mul(x, x)), nc.sum_all(x))
    loss.backward()
    assert np.allclose(x.grad, 2 * x.data + 1)


def test_graph_topological_and_single_visit():
    x = nc.tensor([1.0, 2.0], requires_grad=True)
    y = nc.mul(x, x)
    z = nc.add(y, x)
    loss = nc.sum_all(z)
    graph = nc.ComputeGraph.trace(loss)
    pos = {id(n): i for i, n in enumerate(graph.nodes)}
    for node in graph.nodes:
        for p in node._parents:
            assert pos[id(p)] < pos[id(node)]
    assert len({id(n) for n in graph.nodes}) == len(graph.nodes)
    assert graph.nodes[-1] is loss


# --- per-op gradient checks (float64 shadow mode) ---------------------------

RNG = np.random.default_rng(42)


def rand64(*shape):
    return t64(RNG.uniform(-1, 1, size=shape))


@pytest.mark.parametrize("case", [
    "add", "sub", "mul", "scale", "matmul", "batched_matmul", "transpose",
    "reshape", "gelu", "softmax", "layer_norm", "embedding", "take_rows",
    "masked_mean", "l2norm", "cross_entropy", "mean_all", "dropout",
])
def test_finite_difference_per_op(case):
    if case in ("add", "sub", "mul"):
        a, b = rand64(3, 4), rand64(3, 4)
        fn = {"add": ops.add, "sub": ops.sub, "mul": ops.mul}[case]
        loss_fn = lambda: nc.sum_all(ops.gelu(fn(a, b)))
        params = [a, b]
    elif case == "scale":
        a = rand64(3, 4)
        loss_fn = lambda: nc.sum_all(ops.gelu(ops.scale(a, 1.7)))
        params = [a]
    elif case == "matmul":
        a, b = rand64(3, 4), rand64(4, 2)
        loss_fn = lambda: nc.sum_all(ops.gelu(nc.matmul(a, b)))
        params = [a, b]
    elif case == "batched_matmul":
        a, b = rand64(2, 3, 3, 4), rand64(4, 2)
        loss_fn = lambda: nc.sum_all(ops.gelu(nc.matmul(a, b)))
        params = [a, b]
    elif case == "transpose":
        a = rand64(2, 3, 4)
        loss_fn = lambda: nc.sum_all(ops.gelu(nc.transpose(a, (2, 0, 1))))
        params = [a]
    elif case == "reshape":
        a = rand64(3, 4)
        loss_fn = lambda: nc.sum_all(ops.gelu(nc.reshape(a, (2, 6))))
        params = [a]
    elif case == "gelu":
        a = rand64(3, 4)
        loss_fn = lambda: nc.sum_all(ops.gelu(a))
        params = [a]
    elif case == "softmax":
        a = rand64(3, 5)
        w = t64(RNG.uniform(-1, 1, size=(3, 5)), requires_grad=False)
        loss_fn = lambda: nc.sum_all(nc.mul(nc.softmax_rows(a), w))
        params = [a]
    elif case == "layer_norm":
        a, g, b = rand64(3, 8), rand64(8), rand64(8)
        loss_fn = lambda: nc.sum_all(ops.gelu(nc.layer_norm(a, g, b, eps=1e-5)))
        params = [a, g, b]
    elif case == "embedding":
        table = rand64(7, 4)
        ids = np.array([[0, 3, 3], [6, 1, 0]])
        loss_fn = lambda: nc.sum_all(ops.gelu(nc.embedding(table, ids)))
        params = [table]
    elif case == "take_rows":
        a = rand64(6, 4)
        idx = np.array([0, 2, 2, 5])
        loss_fn = lambda: nc.sum_all(ops.gelu(nc.take_rows(a, idx)))
        params = [a]
    elif case == "masked_mean":
        a = rand64(2, 5, 3)
        mask = np.array([[1, 1, 0, 0, 0], [1, 1, 1, 1, 0]], dtype=np.float64)
        loss_fn = lambda: nc.sum_all(ops.gelu(nc.masked_mean(a, mask)))
        params = [a]
    elif case == "l2norm":
        a = rand64(4, 6)
        loss_fn = lambda: nc.sum_all(ops.gelu(nc.l2_normalize_rows(a)))
        params = [a]
    elif case == "cross_entropy":
        a = rand64(5, 7)
        targets = np.array([0, 3, 6, 2, 2])
        loss_fn = lambda: nc.cross_entropy_rows(a, targets)
        params = [a]
    elif case == "mean_all":
        a = rand64(3, 4)
        loss_fn = lambda: nc.mean_all(ops.gelu(a))
        params = [a]
    elif case == "dropout":
        a = rand64(4, 6)
        loss_fn = lambda: nc.sum_all(ops.gelu(
            ops.dropout(a, 0.3, np.random.default_rng(123))))
        params = [a]
    assert max_gradient_error(loss_fn, params) <= 1.0


# --- adam -------------------------------------------------------------------

def test_adam_zero_grad_leaves_params():
    p = nc.tensor([1.0, -2.0], requires_grad=True)
    st = nc.AdamState([p], learning_rate=0.1)
    before = p.data.copy()
    nc.adam_step([p], [np.zeros(2, dtype=np.float32)], st)
    assert np.array_equal(p.data, before)
    assert st.step == 1


def test_adam_first_step_is_signed_lr():
    p = nc.tensor([1.0, 1.0, 1.0], requires_grad=True)
    g = np.array([0.5, -2.0, 1e-3], dtype=np.float32)
    st = nc.AdamState([p], learning_rate=0.01)
    nc.adam_step([p], [g], st)
    # first step: m_hat/sqrt(v_hat) == sign(g) up to epsilon
    assert np.allclose(p.data, 1.0 - 0.01 * np.sign(g), atol=1e-4)


def test_adam_deterministic():
    def run():
        p = nc.tensor([0.3, -0.7], requires_grad=True)
        st = nc.AdamState([p], learning_rate=0.05)
        g = np.array([0.2, 0.4], dtype=np.float32)
        nc.adam_step([p], [g], st)
        nc.adam_step([p], [g], st)
        return p.data.tobytes()

    assert run() == run()


def test_adam_shape_mismatch():
    p = nc.tensor([1.0, 2.0], requires_grad=True)
    st = nc.AdamState([p])
    with pytest.raises(ShapeError):
        nc.adam_step([p], [np.zeros(3, dtype=np.float32)], st)


# --- serialization ----------------------------------------------------------

def test_tensor_payload_round_trip(tmp_path):
    rng = np.random.default_rng(5)
    named = {
        "alpha": rng.normal(size=(3, 4)).astype(np.float32),
        "beta": rng.normal(size=(7,)).astype(np.float32),
    }
    path = tmp_path / "payload.bin"
    names = nc.write_named_tensors(path, named)
    assert names == ["alpha", "beta"]
    back = nc.read_named_tensors(path, names)
    for k in named:
        assert np.array_equal(back[k], named[k])


def test_tensor_payload_little_endian_layout(tmp_path):
    path = tmp_path / "one.bin"
    with open(path, "wb") as fh:
        nc.write_tensor(fh, np.array([[1.0, 2.0]], dtype=np.float32))
    raw = path.read_bytes()
    # rank=2, dims (1,2), then two LE floats
    assert raw[:12] == (2).to_bytes(4, "little") + (1).to_bytes(4, "little") + (2).to_bytes(4, "little")
    assert np.frombuffer(raw[12:], dtype="<f4").tolist() == [1.0, 2.0]


def test_truncated_payload_rejected(tmp_path):
    path = tmp_path / "bad.bin"
    with open(path, "wb") as fh:
        nc.write_tensor(fh, np.ones((2, 2), dtype=np.float32))
    data = path.read_bytes()[:-3]
    path.write_bytes(data)
    from reqmatch.errors import DataError
    with pytest.raises(DataError):
        nc.read_named_tensors(path, ["x"])


# --- kernel backend parity --------------------------------------------------

def test_kernel_backends_agree():
    from reqmatch.numcore import _kernels_np
    try:
        from reqmatch.numcore import _kernels_cy
    except ImportError:
        pytest.skip("compiled kernels not built")
    rng = np.random.default_rng(9)
    x = rng.uniform(-3, 3, size=(5, 16)).astype(np.float32)
    gy = rng.uniform(-1, 1, size=(5, 16)).astype(np.float32)
    gain = rng.uniform(0.5, 1.5, size=16).astype(np.float32)
    bias = rng.uniform(-0.5, 0.5, size=16).astype(np.float32)

    assert np.allclose(_kernels_cy.gelu_fwd(x), _kernels_np.gelu_fwd(x), atol=1e-6)
    assert np.allclose(_kernels_cy.gelu_bwd(x, gy), _kernels_np.gelu_bwd(x, gy), atol=1e-6)
    s_cy = _kernels_cy.softmax_rows_fwd(x)
    s_np = _kernels_np.softmax_rows_fwd(x)
    assert np.allclose(s_cy, s_np, atol=1e-6)
    assert np.allclose(_kernels_cy.softmax_rows_bwd(s_cy, gy),
                       _kernels_np.softmax_rows_bwd(s_np, gy), atol=1e-6)
    y_cy, m_cy, r_cy = _kernels_cy.layer_norm_fwd(x, gain, bias, 1e-5)
    y_np, m_np, r_np = _kernels_np.layer_norm_fwd(x, gain, bias, 1e-5)
    assert np.allclose(y_cy, y_np, atol=1e-5)
    gx_cy, gg_cy, gb_cy = _kernels_cy.layer_norm_bwd(x, gain, m_cy, r_cy, gy)
    gx_np, gg_np, gb_np = _kernels_np.layer_norm_bwd(x, gain, m_np, r_np, gy)
    assert np.allclose(gx_cy, gx_np, atol=1e-4)
    assert np.allclose(gg_cy, gg_np, atol=1e-4)
    assert np.allclose(gb_cy, gb_np, atol=1e-4)

    p1 = np.ones(32, dtype=np.float32)
    p2 = p1.copy()
    g = rng.uniform(-1, 1, 32).astype(np.float32)
    m1, v1 = np.zeros(32, np.float32), np.zeros(32, np.float32)
    m2, v2 = m1.copy(), v1.copy()
    _kernels_cy.adam_update(p1, g, m1, v1, 1, 0.01, 0.9, 0.999, 1e-8)
    _kernels_np.adam_update(p2, g, m2, v2, 1, 0.01, 0.9, 0.999, 1e-8)
    assert np.allclose(p1, p2, atol=1e-6)
