"""Compiled versus numpy kernels: wall time and agreement.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import time

import numpy as np

from zygmund_lab import _fallback

try:
    from zygmund_lab import _speedups
except ImportError:  # pragma: no cover
    _speedups = None


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases(rng):
    m, npts = 1024, 4096
    a, b = rng.standard_normal(m), rng.standard_normal(m)
    t = rng.uniform(-np.pi, np.pi, npts)
    yield "cos_sin_sums m=1024 pts=4096", "cos_sin_sums", (a, b, t)
    k = np.arange(1, 2 ** 16 + 1, dtype=float)
    x = np.geomspace(1e-4, np.pi, 64)
    cps = np.array([2 ** 15, 2 ** 16], dtype=np.int64)
    yield "partial_sum_sup N=65536 x=64", "partial_sum_sup", (k ** -0.5, x, True, cps)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    print(f"{'case':34s} {'numpy [s]':>10s} {'compiled [s]':>13s} {'speedup':>8s} {'max diff':>10s}")
    for name, fn, call_args in cases(rng):
        t_py, out_py = best_time(lambda: getattr(_fallback, fn)(*call_args), args.repeat)
        if _speedups is None:
            print(f"{name:34s} {t_py:10.4f} {'n/a':>13s}")
            continue
        t_c, out_c = best_time(lambda: getattr(_speedups, fn)(*call_args), args.repeat)
        # both kernels return a sequence of arrays (a tuple or the rows of a matrix)
        diff = max(float(np.max(np.abs(u - v))) for u, v in zip(out_py, out_c))
        print(f"{name:34s} {t_py:10.4f} {t_c:13.4f} {t_py / t_c:8.1f} {diff:10.2e}")


if __name__ == "__main__":
    main()
