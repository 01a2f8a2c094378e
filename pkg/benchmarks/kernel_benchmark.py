"""Timing comparison of the numba kernels against their numpy twins.

Runs each hot kernel in both implementations on workloads shaped like
the real pipeline (epoch filtering, circular smoothing of periodogram
columns, bootstrap index assembly) and prints per-call times plus the
speedup.  Requires numba for the jitted column; without it only the
numpy side runs.

The quadratic-kernel smoother has no jitted twin on purpose: it is a
single circular convolution per matrix entry and is computed with FFTs,
which already beats an explicit scalar loop at every relevant size.

Run:  python benchmarks/kernel_benchmark.py [--repeats 20]
"""

import argparse
import timeit

import numpy as np

from specband import _accel


def _time(func, repeats):
    best = min(timeit.repeat(func, number=1, repeat=repeats))
    return best


def bench_ar2_filter():
    rng = np.random.default_rng(0)
    innovations = np.ascontiguousarray(rng.standard_normal((1500, 30)))
    args = (innovations, 1.7082039324993694, -0.81)
    return ("ar2_filter (T+burn=1500, p=30)",
            lambda: _accel._ar2_filter_np(*args),
            lambda: _accel._ar2_filter_jit(*args))


def bench_circ_mavg():
    rng = np.random.default_rng(1)
    values = np.ascontiguousarray(
        rng.standard_normal((1000, 900)) + 1j * rng.standard_normal((1000, 900)))
    return ("circ_mavg (T=1000, 30x30 entries, m=32)",
            lambda: _accel._circ_mavg_np(values, 32),
            lambda: _accel._circ_mavg_jit(values, 32))


def bench_assemble_indices():
    rng = np.random.default_rng(2)
    n = 1024
    starts = np.ascontiguousarray(rng.integers(0, n, size=800), dtype=np.int64)
    lengths = np.ascontiguousarray(rng.geometric(0.5, size=800), dtype=np.int64)
    assert int(lengths.sum()) >= n
    return ("assemble_block_indices (n=1024, 800 blocks)",
            lambda: _accel._assemble_block_indices_np(starts, lengths, n),
            lambda: _accel._assemble_block_indices_jit(starts, lengths, n))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=20,
                        help="timing repeats per kernel (best is reported)")
    args = parser.parse_args()

    print(f"numba backend active: {_accel.NUMBA_ENABLED}")
    benches = [bench_ar2_filter(),
               bench_circ_mavg(),
               bench_assemble_indices()]

    header = f"{'kernel':<45} {'numpy':>10} {'numba':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, np_call, jit_call in benches:
        t_np = _time(np_call, args.repeats)
        if _accel.NUMBA_ENABLED:
            jit_call()  # compile outside the timed region
            t_jit = _time(jit_call, args.repeats)
            print(f"{name:<45} {t_np * 1e3:>8.3f}ms {t_jit * 1e3:>8.3f}ms "
                  f"{t_np / t_jit:>7.1f}x")
        else:
            print(f"{name:<45} {t_np * 1e3:>8.3f}ms {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
