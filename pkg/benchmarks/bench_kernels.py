"""Side-by-side timing of the compiled kernels against their NumPy twins.

Imports both backend modules directly, so one process measures both and
the REQMATCH_KERNELS switch stays out of the picture. Each kernel is
checked for agreement first; a benchmark of two functions computing
different things would be meaningless.

Usage: python benchmarks/bench_kernels.py [--repeats N] [--rows N]
"""

import argparse
import time

import numpy as np

from reqmatch.numcore import _kernels_np

try:
    from reqmatch.numcore import _kernels_cy
except ImportError:
    _kernels_cy = None


def timed(fn, args, repeats):
    fn(*args)  # warm up
    best = float("inf")
    for _ in range(repeats):
        t = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t)
    return best


def agree(a, b, atol=1e-5):
    a = a if isinstance(a, tuple) else (a,)
    b = b if isinstance(b, tuple) else (b,)
    return all(np.allclose(x, y, atol=atol) for x, y in zip(a, b))


def cases(rows, dim, rng):
    x = rng.standard_normal((rows, dim)).astype(np.float32)
    gy = rng.standard_normal((rows, dim)).astype(np.float32)
    gain = rng.standard_normal(dim).astype(np.float32)
    bias = rng.standard_normal(dim).astype(np.float32)
    y_soft = _kernels_np.softmax_rows_fwd(x)
    _, mean, rstd = _kernels_np.layer_norm_fwd(x, gain, bias, 1e-5)

    flat = rng.standard_normal(rows * dim).astype(np.float32)
    grad = rng.standard_normal(rows * dim).astype(np.float32)

    def adam_args():
        # fresh state per call: adam_update mutates in place
        return (flat.copy(), grad, np.zeros_like(flat), np.zeros_like(flat),
                1, 1e-3, 0.9, 0.999, 1e-8)

    return [
        ("gelu_fwd", "gelu_fwd", lambda: (x,)),
        ("gelu_bwd", "gelu_bwd", lambda: (x, gy)),
        ("softmax_rows_fwd", "softmax_rows_fwd", lambda: (x,)),
        ("softmax_rows_bwd", "softmax_rows_bwd", lambda: (y_soft, gy)),
        ("layer_norm_fwd", "layer_norm_fwd", lambda: (x, gain, bias, 1e-5)),
        ("layer_norm_bwd", "layer_norm_bwd", lambda: (x, gain, mean, rstd, gy)),
        ("adam_update", "adam_update", adam_args),
    ]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=30)
    parser.add_argument("--rows", type=int, default=4096, help="rows per batch (batch x seq)")
    parser.add_argument("--dims", type=int, nargs="+", default=[64, 256])
    args = parser.parse_args(argv)

    if _kernels_cy is None:
        print("compiled extension not built; run `pip install -e . --no-build-isolation`")
        return 1

    rng = np.random.default_rng(0)
    header = f"{'kernel':<18} {'shape':<12} {'numpy ms':>9} {'cython ms':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for dim in args.dims:
        for name, attr, make_args in cases(args.rows, dim, rng):
            np_fn = getattr(_kernels_np, attr)
            cy_fn = getattr(_kernels_cy, attr)
            if name == "adam_update":
                a, b = make_args(), make_args()
                np_fn(*a), cy_fn(*b)
                ok = agree(a[0], b[0]) and agree(a[2], b[2]) and agree(a[3], b[3])
            else:
                ok = agree(np_fn(*make_args()), cy_fn(*make_args()))
            if not ok:
                raise AssertionError(f"{name} backends disagree at dim {dim}")
            t_np = timed(np_fn, make_args(), args.repeats)
            t_cy = timed(cy_fn, make_args(), args.repeats)
            shape = f"{args.rows}x{dim}"
            print(f"{name:<18} {shape:<12} {t_np * 1e3:>9.3f} {t_cy * 1e3:>10.3f} {t_np / t_cy:>7.2f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
