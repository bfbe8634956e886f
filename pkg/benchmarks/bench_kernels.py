"""Time each kernel's numba loop against its numpy twin.

    python3 benchmarks/bench_kernels.py [--repeat 5]

The loop variants are only compiled when numba is importable and
MOCKEXACT_DISABLE_NUMBA is unset; otherwise they run as plain Python and the
numbers mostly show why the numpy path exists.
"""

import argparse
import time

import numpy as np

from mockexact import kernels
from mockexact._accel import backend


def _cases():
    hs = np.array([1, 7, 13, 19], dtype=np.int64)
    ws = np.array([1, -1, -1, 1], dtype=np.int64)
    ms = np.ones(4, dtype=np.int64)
    return [
        ("dedekind6 c=20011", kernels._dedekind6_loop, kernels._dedekind6_numpy, (20011,)),
        ("inverses c=100003", kernels._inverses_loop, kernels._inverses_numpy, (100003,)),
        ("classical_hist c=30011", kernels._classical_hist_loop, kernels._classical_hist_numpy, (3, 7, 30011)),
        ("sqrt_scan M=400000", kernels._sqrt_scan_loop, kernels._sqrt_scan_numpy, (-23, 400_000)),
        ("weil_hist N=6 c=211", kernels._weil_hist_loop, kernels._weil_hist_numpy, (6, 211, hs, ws, 11, ms, -23)),
        ("shintani_hist N=60 c=5003", kernels._shintani_hist_loop, kernels._shintani_hist_numpy, (60, 7, 5003, 3574, 11, 13)),
        ("poincare_terms c<=3000", kernels._poincare_loop, kernels._poincare_numpy, (3, 6, 1, 3000)),
        ("partition_A c=20011", kernels._partition_A_loop, kernels._partition_A_numpy, (20011, 5)),
    ]


def _best(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def _same(x, y):
    if isinstance(x, tuple):
        return all(_same(a, b) for a, b in zip(x, y))
    if isinstance(x, np.ndarray):
        if x.dtype.kind == "f":
            return np.allclose(x, y, rtol=1e-9, atol=1e-9)
        return np.array_equal(x, np.asarray(y))
    return abs(float(x) - float(y)) < 1e-6 * max(1.0, abs(float(x)))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    print(f"backend: {backend()}")
    print(f"{'kernel':30s} {'loop (ms)':>12s} {'numpy (ms)':>12s} {'ratio':>8s}  agree")
    for name, loop, vec, a in _cases():
        loop(*a)  # compile outside the timing
        t_loop = _best(loop, a, args.repeat)
        t_vec = _best(vec, a, args.repeat)
        ok = _same(loop(*a), vec(*a))
        print(f"{name:30s} {1e3 * t_loop:12.2f} {1e3 * t_vec:12.2f} {t_vec / t_loop:8.2f}  {ok}")


if __name__ == "__main__":
    main()
