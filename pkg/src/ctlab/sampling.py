"""Seeded Monte-Carlo estimation against evaluation oracles.

Reproducibility contract: sample k always draws from its own generator
stream derived from (seed, k), coordinates are drawn in index order
(coordinate 1 first), and reductions are order-fixed (math.fsum over the
index-ordered value array). Estimates are therefore bit-identical for a
fixed seed regardless of the worker count; threads only change wall time.

Bernoulli draws compare a 64-bit output word against floor(p * 2^64), so
the per-draw bias relative to the exact rational p is below 2^-64.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations

from .errors import DomainError, NotMonotoneError
from .rng import XorShift64Star, bernoulli_threshold, sample_stream
from .spaces import BiasedMeasure, BooleanFunction, is_monotone

DEFAULT_SUPPORT_CAP = 24
DEFAULT_CALL_BUDGET = 200_000


def resolve_threads(threads: int | None) -> int:
    """Explicit argument, else CTL_THREADS, else all cores."""
    if threads is None:
        env = os.environ.get("CTL_THREADS")
        if env is not None:
            try:
                threads = int(env)
            except ValueError as exc:
                raise DomainError(f"CTL_THREADS must be an integer, got {env!r}") from exc
        else:
            threads = os.cpu_count() or 1
    if threads < 1:
        raise DomainError("thread count must be at least 1")
    return threads


class FunctionOracle:
    """Evaluation access to a function too large (or too opaque) to tabulate.

    `fn` maps a point bitmask (coordinate 1 = bit 0) to -1 or +1 and must be
    deterministic. The monotone flag gates monotone-only estimators.
    """

    __slots__ = ("n", "fn", "monotone")

    def __init__(self, n: int, fn, monotone: bool = False):
        if n < 1:
            raise DomainError("oracle needs at least one coordinate")
        self.n = n
        self.fn = fn
        self.monotone = monotone

    @classmethod
    def from_table(cls, f: BooleanFunction) -> "FunctionOracle":
        return cls(f.n, f.value_at, monotone=is_monotone(f))


@dataclass(frozen=True, slots=True)
class Estimate:
    mean: float
    stderr: float
    ci95: tuple[float, float]
    samples: int
    seed: int
    undecided: int = 0


def summarize(values, seed: int, undecided: int = 0) -> Estimate:
    """Order-fixed mean / stderr / normal 95% CI over an indexed value list."""
    n = len(values)
    if n < 2:
        raise DomainError("need at least 2 samples")
    mean = math.fsum(values) / n
    var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    stderr = math.sqrt(var / n)
    half = 1.96 * stderr
    return Estimate(
        mean=mean,
        stderr=stderr,
        ci95=(mean - half, mean + half),
        samples=n,
        seed=seed,
        undecided=undecided,
    )


def sample_point(measure: BiasedMeasure, n: int, stream: XorShift64Star) -> int:
    """One point of the product measure as a bitmask; n draws, coordinate 1 first."""
    t = bernoulli_threshold(measure.p)
    x = 0
    for j in range(n):
        if stream.next64() < t:
            x |= 1 << j
    return x


def _fill_indexed(fill_range, count: int, threads: int) -> None:
    """Run fill_range(start, stop) over [0, count) split into `threads` chunks.

    Chunk boundaries never influence values: every sample owns its stream
    and its output slot.
    """
    threads = min(threads, count) or 1
    if threads == 1:
        fill_range(0, count)
        return
    step = -(-count // threads)
    ranges = [(k, min(k + step, count)) for k in range(0, count, step)]
    with ThreadPoolExecutor(max_workers=len(ranges)) as pool:
        for fut in [pool.submit(fill_range, a, b) for a, b in ranges]:
            fut.result()


def estimate_expectation(
    oracle: FunctionOracle,
    measure: BiasedMeasure,
    samples: int,
    seed: int,
    threads: int | None = None,
) -> Estimate:
    if samples < 2:
        raise DomainError("need samples >= 2")
    nthreads = resolve_threads(threads)
    vals = [0.0] * samples
    n, fn = oracle.n, oracle.fn

    def fill(start: int, stop: int) -> None:
        for k in range(start, stop):
            x = sample_point(measure, n, sample_stream(seed, k))
            vals[k] = float(fn(x))

    _fill_indexed(fill, samples, nthreads)
    return summarize(vals, seed)


def estimate_influence_pivotal(
    oracle: FunctionOracle,
    measure: BiasedMeasure,
    i: int,
    samples: int,
    seed: int,
    threads: int | None = None,
) -> Estimate:
    """Estimates 4pq P[flipping coordinate i changes f]."""
    if samples < 2:
        raise DomainError("need samples >= 2")
    if not 1 <= i <= oracle.n:
        raise DomainError(f"coordinate {i} outside 1..{oracle.n}")
    nthreads = resolve_threads(threads)
    scale = float(4 * measure.p * measure.q)
    bit = 1 << (i - 1)
    vals = [0.0] * samples
    n, fn = oracle.n, oracle.fn

    def fill(start: int, stop: int) -> None:
        for k in range(start, stop):
            x = sample_point(measure, n, sample_stream(seed, k))
            vals[k] = scale if fn(x | bit) != fn(x & ~bit) else 0.0

    _fill_indexed(fill, samples, nthreads)
    return summarize(vals, seed)


def has_small_witness(fn, supp: list[int], limit: int, budget: int) -> bool | None:
    """Does some subset of supp, of size <= limit, map to +1 under 1_S?

    Subsets are visited in ascending size with early exit. Returns None if
    the call budget runs out first (undecided).
    """
    calls = 0
    for size in range(1, limit + 1):
        for combo in combinations(supp, size):
            if calls >= budget:
                return None
            mask = 0
            for j in combo:
                mask |= 1 << j
            calls += 1
            if fn(mask) == 1:
                return True
    return False


def estimate_witness_probability(
    oracle: FunctionOracle,
    measure: BiasedMeasure,
    B: int,
    samples: int,
    seed: int,
    support_cap: int = DEFAULT_SUPPORT_CAP,
    threads: int | None = None,
    call_budget: int = DEFAULT_CALL_BUDGET,
) -> Estimate:
    """Fraction of sampled x whose support contains a small all-ones +1 set.

    Samples whose enumeration was truncated (support above support_cap and
    budget exhausted) count as 0 in the mean, so the estimate is a lower
    bound; their count is surfaced in the undecided field.
    """
    if not oracle.monotone:
        raise NotMonotoneError("witness estimation requires a monotone oracle")
    if samples < 2:
        raise DomainError("need samples >= 2")
    if B < 1:
        raise DomainError("witness size cap must be at least 1")
    nthreads = resolve_threads(threads)
    vals = [0.0] * samples
    undecided = [0] * samples
    n, fn = oracle.n, oracle.fn

    def fill(start: int, stop: int) -> None:
        for k in range(start, stop):
            x = sample_point(measure, n, sample_stream(seed, k))
            supp = [j for j in range(n) if (x >> j) & 1]
            limit = min(B, len(supp))
            budget = call_budget if len(supp) > support_cap else 1 << 62
            hit = has_small_witness(fn, supp, limit, budget)
            if hit is None:
                undecided[k] = 1
            elif hit:
                vals[k] = 1.0

    _fill_indexed(fill, samples, nthreads)
    return summarize(vals, seed, undecided=sum(undecided))
