"""Time the flow-residual kernel: numba loops against the numpy fallback.

    python3 benchmarks/bench_flow.py [--samples 4000] [--repeat 3]
"""
import argparse
import time

import numpy as np

from lsakit import _kernels
from lsakit import families as fam
from lsakit.ma_verify import flow_setup


def bench(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=4000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    print(f"numba available: {_kernels.HAVE_NUMBA}")
    print(f"{'algebra':<10} {'samples':>8} {'numpy s':>10} {'numba s':>10} {'speedup':>8} {'max |diff|':>11}")
    for A in [fam.cayley(3), fam.cayley(6), fam.parab(5), fam.six_dim()]:
        n = A.dim
        Lb, trR, exps, coeffs = flow_setup(A)
        a = rng.uniform(-1, 1, (args.samples, n))
        x0 = rng.uniform(-1, 1, (args.samples, n))
        T = rng.uniform(0, 1, args.samples)
        call = lambda b: _kernels.flow_residuals(Lb, trR, exps, coeffs, a, x0, T, backend=b)  # noqa: E731
        t_np = bench(lambda: call("numpy"), args.repeat)
        if _kernels.HAVE_NUMBA:
            call("numba")  # compile outside the timed region
            t_nb = bench(lambda: call("numba"), args.repeat)
            diff = np.abs(call("numba")[0] - call("numpy")[0]).max()
            print(f"{A.name:<10} {args.samples:>8} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>7.1f}x {diff:>11.2e}")
        else:
            print(f"{A.name:<10} {args.samples:>8} {t_np:>10.4f} {'-':>10} {'-':>8} {'-':>11}")


if __name__ == "__main__":
    main()
