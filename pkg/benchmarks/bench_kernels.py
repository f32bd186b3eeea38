"""Timing comparison of the compiled lattice kernels against the numpy
reference, plus a bit-parity check on every timed input.

Run:  python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import math
import time

import numpy as np

from ctlab.kernels import backend_name
from ctlab.kernels import reference as ref
from ctlab.rng import XorShift64Star, mix64

try:
    from ctlab.kernels import _lattice as comp
except ImportError:
    comp = None


def _values(gen: XorShift64Star, size: int) -> np.ndarray:
    out = np.empty(size)
    for i in range(size):
        out[i] = (gen.next64() >> 11) / float(1 << 53) * 2.0 - 1.0
    return out


def _time(fn, repeat: int) -> float:
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_butterfly(gen, repeat):
    print("butterfly (full transform, one pass per coordinate)")
    print(f"  {'n':>3} {'reference':>12} {'compiled':>12} {'speedup':>8}")
    p, q, s = 0.3, 0.7, math.sqrt(0.21)
    for n in (10, 14, 18, 20):
        base = _values(gen, 1 << n)
        a = base.copy()
        t_ref = _time(lambda: ref.butterfly(np.copyto(a, base) or a, n, p, q, s), repeat)
        if comp is None:
            print(f"  {n:>3} {t_ref*1e3:>10.3f}ms {'n/a':>12}")
            continue
        b = base.copy()
        t_c = _time(lambda: comp.butterfly(np.copyto(b, base) or b, n, p, q, s), repeat)
        ref.butterfly(np.copyto(a, base) or a, n, p, q, s)
        comp.butterfly(np.copyto(b, base) or b, n, p, q, s)
        assert a.tobytes() == b.tobytes(), f"parity break at n={n}"
        print(f"  {n:>3} {t_ref*1e3:>10.3f}ms {t_c*1e3:>10.3f}ms {t_ref/t_c:>7.1f}x")


def bench_zeta(gen, repeat):
    print("zeta_point (all conditional averages at one point)")
    print(f"  {'n':>3} {'reference':>12} {'compiled':>12} {'speedup':>8}")
    r0, r1 = -math.sqrt(3.0 / 7.0), math.sqrt(7.0 / 3.0)
    for n in (10, 14, 16, 18):
        coeffs = _values(gen, 1 << n)
        x = gen.below(1 << n)
        t_ref = _time(lambda: ref.zeta_point(coeffs, n, r0, r1, x), repeat)
        if comp is None:
            print(f"  {n:>3} {t_ref*1e3:>10.3f}ms {'n/a':>12}")
            continue
        t_c = _time(lambda: comp.zeta_point(coeffs, n, r0, r1, x), repeat)
        a = ref.zeta_point(coeffs, n, r0, r1, x)
        b = comp.zeta_point(coeffs, n, r0, r1, x)
        assert a.tobytes() == b.tobytes(), f"parity break at n={n}"
        print(f"  {n:>3} {t_ref*1e3:>10.3f}ms {t_c*1e3:>10.3f}ms {t_ref/t_c:>7.1f}x")


def bench_junta_block(gen, repeat):
    print("junta_stats_block (per-sample capped max-abs reduction)")
    print(f"  {'n':>3} {'samples':>8} {'reference':>12} {'compiled':>12} {'speedup':>8}")
    r0, r1 = -math.sqrt(1.0 / 3.0), math.sqrt(3.0)
    for n, samples in ((12, 64), (14, 32), (16, 16)):
        coeffs = _values(gen, 1 << n)
        xs = np.array([gen.below(1 << n) for _ in range(samples)], dtype=np.uint32)
        pc = np.bitwise_count(np.arange(1 << n, dtype=np.uint32)).astype(np.int64)
        sel = np.nonzero((pc >= 1) & (pc <= 4))[0].astype(np.int64)
        out_a = np.zeros(samples)
        out_b = np.zeros(samples)
        t_ref = _time(
            lambda: ref.junta_stats_block(coeffs, n, r0, r1, xs, sel, out_a, 0, samples),
            repeat,
        )
        if comp is None:
            print(f"  {n:>3} {samples:>8} {t_ref*1e3:>10.3f}ms {'n/a':>12}")
            continue
        t_c = _time(
            lambda: comp.junta_stats_block(coeffs, n, r0, r1, xs, sel, out_b, 0, samples),
            repeat,
        )
        assert out_a.tobytes() == out_b.tobytes(), f"parity break at n={n}"
        print(f"  {n:>3} {samples:>8} {t_ref*1e3:>10.3f}ms {t_c*1e3:>10.3f}ms "
              f"{t_ref/t_c:>7.1f}x")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5,
                        help="timing repetitions, best-of (default 5)")
    args = parser.parse_args()
    print(f"selected backend: {backend_name()}")
    if comp is None:
        print("compiled kernels unavailable; timing the reference alone")
    gen = XorShift64Star(mix64(2024))
    bench_butterfly(gen, args.repeat)
    bench_zeta(gen, args.repeat)
    bench_junta_block(gen, args.repeat)


if __name__ == "__main__":
    main()
