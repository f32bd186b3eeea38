"""Junta-max expectation, witness/booster alternatives, and the proof-step
diagnostics that sit behind them.

The central quantity is E[max over 0 < |S| <= B of |avg_S(x)|], where
avg_S is the conditional average of f onto the coordinates S. The exact
path computes every avg_S as an integer table over a power of the bias
denominator; the sampling path reuses the per-point subset-sum kernel. The
witness and booster searches are the two alternatives of the corollary for
monotone functions near their critical bias, and proof_diagnostics exposes
the indicator-splitting argument term by term so each inequality in it can
be checked numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from . import kernels
from .bits import popcount, popcounts_array, subset_to_coords
from .decomposition import Spectrum, averaged_direct, transform
from .errors import DomainError, ExactPathUnavailableError, NotMonotoneError
from .influence import total_influence
from .sampling import Estimate, resolve_threads, sample_point, summarize
from .rng import sample_stream
from .spaces import BiasedMeasure, BooleanFunction, expectation, is_monotone

EXACT_MAX_N = 16
ENTRY_BUDGET = 1 << 25
DIAGNOSTICS_MAX_N = 12
_FULL_MATRIX_MAX_N = 10


# ---------------------------------------------------------------------------
# Spectral level mass and tail
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class LevelReport:
    B: int
    level_mass: float          # sum of squared coefficients, 0 < |S| <= B
    tail: float                # sum over |S| > B
    total_influence: float     # sum of |S| * coefficient^2
    tail_bound: float          # total_influence / B
    tail_bound_ok: bool


def level_report(spec: Spectrum, B: int) -> LevelReport:
    if B < 1:
        raise DomainError("size cap must be at least 1")
    pc = popcounts_array(spec.n).astype(np.int64)
    csq = spec.coeffs * spec.coeffs
    level = float(csq[(pc >= 1) & (pc <= B)].sum())
    tail = float(csq[pc > B].sum())
    ti = float(np.dot(pc.astype(np.float64), csq))
    bound = ti / B
    return LevelReport(
        B=B,
        level_mass=level,
        tail=tail,
        total_influence=ti,
        tail_bound=bound,
        tail_bound_ok=tail <= bound + 1e-9,
    )


# ---------------------------------------------------------------------------
# Exact conditional-average tables
# ---------------------------------------------------------------------------


class ExactAverages:
    """Integer-numerator tables of the conditional averages of f.

    For bias p = a/b, the average onto S at a point u of {0,1}^S is
    table(S)[u] / b^(n-|S|) exactly. Tables are built by removing one
    coordinate at a time from the full set: dropping coordinate j mixes the
    two half-tables with weights (b-a) and a. Arrays are int64 while b^n
    fits comfortably, arbitrary-precision integers otherwise, and the total
    number of memoized entries is capped; exceeding the cap raises
    ExactPathUnavailableError, which is the signal to use the sampling path.
    """

    __slots__ = ("f", "n", "a", "b", "entry_budget", "entries", "tables", "_int64")

    def __init__(self, f: BooleanFunction, measure: BiasedMeasure,
                 entry_budget: int = ENTRY_BUDGET):
        self.f = f
        self.n = f.n
        self.a = measure.p.numerator
        self.b = measure.p.denominator
        self.entry_budget = entry_budget
        self.entries = 0
        self.tables: dict[int, np.ndarray] = {}
        self._int64 = self.b**self.n < (1 << 62)
        if self._int64:
            signs = np.where(f.plus_mask(), 1, -1).astype(np.int64)
        else:
            signs = np.array([f.value_at(x) for x in range(1 << self.n)], dtype=object)
        self._store((1 << self.n) - 1, signs)

    def _store(self, S: int, arr: np.ndarray) -> None:
        self.entries += arr.shape[0]
        if self.entries > self.entry_budget:
            raise ExactPathUnavailableError(
                f"exact average tables would exceed {self.entry_budget} entries; "
                "use the sampling variant"
            )
        arr.setflags(write=False)
        self.tables[S] = arr

    def denominator(self, S: int) -> int:
        return self.b ** (self.n - popcount(S))

    def table(self, S: int) -> np.ndarray:
        """Numerator table over the compressed coordinates of S (ascending)."""
        if not 0 <= S < (1 << self.n):
            raise DomainError("subset outside the coordinate range")
        full = (1 << self.n) - 1
        chain = []
        cur = S
        while cur not in self.tables:
            chain.append(cur)
            cur |= (~cur & full) & -(~cur & full)  # fill lowest missing bit
        for child in reversed(chain):
            j = ((~child & full) & -(~child & full)).bit_length() - 1
            parent = self.tables[child | (1 << j)]
            pos = popcount(child & ((1 << j) - 1))
            u = np.arange(1 << popcount(child), dtype=np.int64)
            lowmask = (1 << pos) - 1
            u0 = (u & lowmask) | ((u >> pos) << (pos + 1))
            u1 = u0 | (1 << pos)
            self._store(child, (self.b - self.a) * parent[u0] + self.a * parent[u1])
        return self.tables[S]

    def value(self, S: int, u: int) -> Fraction:
        return Fraction(int(self.table(S)[u]), self.denominator(S))

    def min_value(self, S: int) -> Fraction:
        return Fraction(int(self.table(S).min()), self.denominator(S))


# ---------------------------------------------------------------------------
# Junta-max expectation, exact and sampled
# ---------------------------------------------------------------------------


def junta_max_expectation(f: BooleanFunction, measure: BiasedMeasure, B: int) -> Fraction:
    """E[max over 0 < |S| <= B of |avg_S(x)|], exact.

    For B >= n the max includes S = [n], where the average is f itself with
    |f| = 1, so the answer is 1 without any table work. The general path
    scales every table to the common denominator b^n and takes a running
    pointwise integer max.
    """
    if B < 1:
        raise DomainError("size cap must be at least 1")
    n = f.n
    if B >= n:
        return Fraction(1)
    if n > EXACT_MAX_N:
        raise ExactPathUnavailableError(
            f"exact path capped at n <= {EXACT_MAX_N}; use junta_max_expectation_mc"
        )
    ex = ExactAverages(f, measure)
    b = ex.b
    idx = np.arange(1 << n, dtype=np.int64)
    bit_at = [(idx >> j) & 1 for j in range(n)]
    if ex._int64:
        best = np.zeros(1 << n, dtype=np.int64)
    else:
        best = np.array([0] * (1 << n), dtype=object)
    for S in range(1, 1 << n):
        k = popcount(S)
        if k > B:
            continue
        scaled = np.abs(ex.table(S)) * b**k
        u = np.zeros(1 << n, dtype=np.int64)
        r = 0
        m = S
        while m:
            j = (m & -m).bit_length() - 1
            u |= bit_at[j] << r
            r += 1
            m &= m - 1
        np.maximum(best, scaled[u], out=best)
    pc = popcounts_array(n)
    p, q = measure.p, measure.q
    total = Fraction(0)
    for k in range(n + 1):
        s = sum(int(v) for v in best[pc == k])
        if s:
            total += p**k * q ** (n - k) * s
    return total / Fraction(b**n)


def junta_max_expectation_mc(
    source,
    measure: BiasedMeasure,
    B: int,
    samples: int,
    seed: int,
    threads: int | None = None,
) -> Estimate:
    """Sampling estimate of the junta-max expectation.

    `source` is a BooleanFunction or a precomputed Spectrum. Each sample
    runs the per-point subset-sum kernel over a scratch copy of the
    coefficients and reduces by max-abs over the admissible subsets; the
    per-sample streams and the order-fixed reduction make the result
    independent of the thread count.
    """
    if B < 1:
        raise DomainError("size cap must be at least 1")
    if samples < 100:
        raise DomainError("need samples >= 100")
    spec = source if isinstance(source, Spectrum) else transform(source, measure)
    n = spec.n
    cap = min(B, n)
    pc = popcounts_array(n).astype(np.int64)
    sel = np.nonzero((pc >= 1) & (pc <= cap))[0].astype(np.int64)
    xs = np.empty(samples, dtype=np.uint32)
    for k in range(samples):
        xs[k] = sample_point(measure, n, sample_stream(seed, k))
    out = np.zeros(samples, dtype=np.float64)
    nthreads = min(resolve_threads(threads), samples)
    step = -(-samples // nthreads)
    ranges = [(k, min(k + step, samples)) for k in range(0, samples, step)]
    if len(ranges) == 1:
        kernels.junta_stats_block(spec.coeffs, n, spec.r0, spec.r1, xs, sel, out, 0, samples)
    else:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=len(ranges)) as pool:
            futs = [
                pool.submit(
                    kernels.junta_stats_block,
                    spec.coeffs, n, spec.r0, spec.r1, xs, sel, out, a, b2,
                )
                for a, b2 in ranges
            ]
            for fut in futs:
                fut.result()
    return summarize(out.tolist(), seed)


# ---------------------------------------------------------------------------
# Witness probability and booster search
# ---------------------------------------------------------------------------


def witness_probability(f: BooleanFunction, measure: BiasedMeasure, B: int) -> Fraction:
    """P[some S inside the support of x, |S| <= B, has f(1_S) = +1]; exact.

    The witness sets of size <= B seed an upward closure over the subset
    lattice (one OR pass per coordinate); the closed set is then weighed by
    Hamming weight.
    """
    if not is_monotone(f):
        raise NotMonotoneError("witness probability requires a monotone function")
    if B < 1:
        raise DomainError("witness size cap must be at least 1")
    n = f.n
    pc = popcounts_array(n)
    up = f.plus_mask() & (pc <= min(B, n))
    for i in range(n):
        view = up.reshape(-1, 2, 1 << i)
        view[:, 1, :] |= view[:, 0, :]
    counts = np.bincount(pc[up].astype(np.int64), minlength=n + 1)
    p, q = measure.p, measure.q
    total = Fraction(0)
    for k in range(n + 1):
        if counts[k]:
            total += int(counts[k]) * p**k * q ** (n - k)
    return total


@dataclass(frozen=True, slots=True)
class BoosterHit:
    subset: int
    coords: tuple[int, ...]
    boost: Fraction


def booster_search(
    f: BooleanFunction,
    measure: BiasedMeasure,
    B: int,
    delta_prime,
    work_budget: int = ENTRY_BUDGET,
) -> list[BoosterHit]:
    """All S with |S| <= B, f(1_S) = -1, and conditional boost above the
    threshold; sorted by boost descending, ties by subset encoding.

    The empty set qualifies when E[f] itself exceeds the threshold. Floats
    passed as the threshold are converted to their exact binary value.
    """
    if not is_monotone(f):
        raise NotMonotoneError("booster search requires a monotone function")
    if B < 0:
        raise DomainError("size cap must be nonnegative")
    dp = Fraction(delta_prime)
    n = f.n
    cap = min(B, n)
    cands = [S for S in range(1 << n) if popcount(S) <= cap and f.value_at(S) == -1]
    work = sum(1 << (n - popcount(S)) for S in cands)
    if work > work_budget:
        raise ExactPathUnavailableError(
            "booster enumeration too large; lower B or pre-filter candidates"
        )
    hits = []
    for S in cands:
        boost = averaged_direct(f, measure, S, S)
        if boost > dp:
            hits.append(BoosterHit(subset=S, coords=subset_to_coords(S), boost=boost))
    hits.sort(key=lambda h: (-h.boost, h.subset))
    return hits


def conditional_boost(f: BooleanFunction, measure: BiasedMeasure, S) -> Fraction:
    """E[f given the coordinates of S are all 1]; exact.

    Equals the conditional average onto S at the all-ones point of S, which
    is the quantity the booster search thresholds.
    """
    from .decomposition import _as_subset

    mask = _as_subset(S, f.n)
    return averaged_direct(f, measure, mask, mask)


# ---------------------------------------------------------------------------
# Monotone lower bound on conditional averages
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class MarginReport:
    B: int
    min_margin: Fraction
    subset: int
    coords: tuple[int, ...]


def monotone_lower_bound_check(f: BooleanFunction, measure: BiasedMeasure, B: int) -> MarginReport:
    """min over x and |S| <= B of avg_S(x) - (E[f] - 2p|S|); monotone only.

    For monotone f the average onto S is minimized at the all-zeros x_S,
    and forcing |S| coordinates to 0 can lower the expectation of a +-1
    valued function by at most 2p per coordinate, so the margin is >= 0.
    """
    if not is_monotone(f):
        raise NotMonotoneError("the lower bound argument requires a monotone function")
    if B < 0:
        raise DomainError("size cap must be nonnegative")
    ex = ExactAverages(f, measure)
    ef = expectation(f, measure)
    twop = 2 * measure.p
    best_margin = None
    best_S = 0
    for S in range(1 << f.n):
        k = popcount(S)
        if k > B:
            continue
        margin = ex.min_value(S) - (ef - twop * k)
        if best_margin is None or margin < best_margin:
            best_margin = margin
            best_S = S
    return MarginReport(
        B=B, min_margin=best_margin, subset=best_S, coords=subset_to_coords(best_S)
    )


# ---------------------------------------------------------------------------
# Default parameters and the corollary check
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class ParamDefaults:
    B: int
    epsilon: Fraction
    M: int
    delta_prime: Fraction | None


def default_parameters(C, junta_max=None) -> ParamDefaults:
    """B = ceil(10C), epsilon = 2^(-ceil(C)-2), M = 4/epsilon; the booster
    threshold defaults to half the measured junta-max when that is given."""
    C = Fraction(C)
    if C <= 0:
        raise DomainError("total influence bound must be positive")
    k = math.ceil(C)
    return ParamDefaults(
        B=math.ceil(10 * C),
        epsilon=Fraction(1, 1 << (k + 2)),
        M=1 << (k + 4),
        delta_prime=Fraction(junta_max) / 2 if junta_max is not None else None,
    )


@dataclass(frozen=True, slots=True)
class CorollaryReport:
    C: Fraction
    B: int
    delta_prime: Fraction
    expectation: Fraction
    balanced: bool
    p_gate_bound: Fraction     # delta_prime / (20 C)
    p_gate: bool               # p < that bound
    hypotheses_hold: bool
    witness_prob: Fraction
    alternative1: bool         # witness_prob > delta_prime
    boosters: tuple[BoosterHit, ...]
    alternative2: bool
    holds: bool


def corollary_check(
    f: BooleanFunction,
    measure: BiasedMeasure,
    delta_prime=None,
    B: int | None = None,
    tau_balance: Fraction = Fraction(1, 10**9),
) -> CorollaryReport:
    """Evaluate both alternatives unconditionally and report every
    hypothesis flag; the at-least-one conclusion is only guaranteed when the
    hypotheses hold."""
    if not is_monotone(f):
        raise NotMonotoneError("the corollary applies to monotone functions")
    ef = expectation(f, measure)
    if abs(ef) == 1:
        raise DomainError("constant function: balance is unattainable")
    C = total_influence(f, measure)
    if B is None:
        B = math.ceil(10 * C)
    if delta_prime is None:
        dp = junta_max_expectation(f, measure, B) / 2
    else:
        dp = Fraction(delta_prime)
    wp = witness_probability(f, measure, B)
    boosters = tuple(booster_search(f, measure, B, dp))
    alt1 = wp > dp
    alt2 = bool(boosters)
    balanced = abs(ef) <= tau_balance
    bound = dp / (20 * C)
    gate = measure.p < bound
    return CorollaryReport(
        C=C,
        B=B,
        delta_prime=dp,
        expectation=ef,
        balanced=balanced,
        p_gate_bound=bound,
        p_gate=gate,
        hypotheses_hold=balanced and gate,
        witness_prob=wp,
        alternative1=alt1,
        boosters=boosters,
        alternative2=alt2,
        holds=alt1 or alt2,
    )


# ---------------------------------------------------------------------------
# Theorem-level report
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class TheoremReport:
    C_used: Fraction
    B: int
    lhs_exact: Fraction | None
    lhs_estimate: Estimate | None
    balanced_defect: Fraction


def theorem_report(
    f: BooleanFunction,
    measure: BiasedMeasure,
    B: int | None = None,
    samples: int | None = None,
    seed: int = 0,
    threads: int | None = None,
) -> TheoremReport:
    C = total_influence(f, measure)
    if B is None:
        if C == 0:
            raise DomainError("constant function has no default size cap")
        B = math.ceil(10 * C)
    defect = abs(expectation(f, measure))
    if samples is None:
        lhs = junta_max_expectation(f, measure, B)
        return TheoremReport(C_used=C, B=B, lhs_exact=lhs, lhs_estimate=None,
                             balanced_defect=defect)
    est = junta_max_expectation_mc(f, measure, B, samples, seed, threads)
    return TheoremReport(C_used=C, B=B, lhs_exact=None, lhs_estimate=est,
                         balanced_defect=defect)


# ---------------------------------------------------------------------------
# Proof diagnostics
# ---------------------------------------------------------------------------


class _DiagBase:
    """Pointwise tables shared by every (epsilon, M) evaluation at fixed
    (f, measure, B): squared-component sums per coordinate, per point."""

    __slots__ = ("n", "cap", "csq", "pc", "keep", "keep_pos", "masses",
                 "H", "hsq", "level_x", "level_mass", "coord_second",
                 "total_influence", "G", "t0", "t1", "sidx")

    def __init__(self, f: BooleanFunction, measure: BiasedMeasure, cap: int):
        n = f.n
        spec = transform(f, measure)
        self.n = n
        self.cap = cap
        size = 1 << n
        self.csq = spec.coeffs * spec.coeffs
        self.pc = popcounts_array(n).astype(np.int64)
        self.keep = self.pc <= cap
        self.keep_pos = (self.pc >= 1) & self.keep
        self.t0 = spec.r0 * spec.r0
        self.t1 = spec.r1 * spec.r1
        self.sidx = np.arange(size, dtype=np.uint32)
        wmass = [float(measure.p**k * measure.q ** (n - k)) for k in range(n + 1)]
        self.masses = np.array([wmass[k] for k in self.pc])
        self.G = self._rows(0, size) if n <= _FULL_MATRIX_MAX_N else None
        H = np.empty((size, n))
        hsq = np.empty(size)
        level_x = np.empty(size)
        for start in range(0, size, 1 << _FULL_MATRIX_MAX_N):
            stop = min(start + (1 << _FULL_MATRIX_MAX_N), size)
            rows = self.G[start:stop] if self.G is not None else self._rows(start, stop)
            for i in range(n):
                seli = ((self.sidx >> np.uint32(i)) & np.uint32(1)).astype(bool) & self.keep
                H[start:stop, i] = rows[:, seli].sum(axis=1)
            hsq[start:stop] = rows[:, self.keep].sum(axis=1)
            level_x[start:stop] = rows[:, self.keep_pos].sum(axis=1)
        self.H = H
        self.hsq = hsq
        self.level_x = level_x
        self.level_mass = float(self.csq[self.keep_pos].sum())
        self.coord_second = tuple(
            float(self.csq[(((self.sidx >> np.uint32(i)) & np.uint32(1)).astype(bool))
                           & self.keep].sum())
            for i in range(n)
        )
        self.total_influence = float(np.dot(self.pc.astype(np.float64), self.csq))

    def _rows(self, start: int, stop: int) -> np.ndarray:
        """Rows x in [start, stop) of the squared-component matrix
        G[x, S] = csq[S] * prod over i in S of r(x_i)^2."""
        xidx = np.arange(start, stop, dtype=np.uint32)
        G = np.tile(self.csq, (stop - start, 1))
        for i in range(self.n):
            rows1 = (((xidx >> np.uint32(i)) & np.uint32(1)) == 1)
            cols1 = (((self.sidx >> np.uint32(i)) & np.uint32(1)) == 1)
            G[np.ix_(rows1, cols1)] *= self.t1
            G[np.ix_(~rows1, cols1)] *= self.t0
        return G

    def rows(self, start: int, stop: int) -> np.ndarray:
        if self.G is not None:
            return self.G[start:stop]
        return self._rows(start, stop)


@lru_cache(maxsize=4)
def _diag_base(f: BooleanFunction, measure: BiasedMeasure, cap: int) -> _DiagBase:
    return _DiagBase(f, measure, cap)


@dataclass(frozen=True, slots=True)
class DiagnosticsReport:
    B: int
    epsilon: float
    M: float
    coordinate_second_moments: tuple[float, ...]   # E[h_i^2] per coordinate
    mean_eta_sum: float                            # E[number of large h_i]
    mean_one_minus_xi: float
    term1: float
    term2: float
    term3: float
    level_mass: float
    split_ok: bool
    markov_links: tuple[float, float, float, float]
    markov_ok: bool
    counting_bound_ok: bool
    h4_norm: float
    holder_q: float
    holder_q_prime: float


def proof_diagnostics(
    f: BooleanFunction,
    measure: BiasedMeasure,
    B: int,
    epsilon,
    M,
) -> DiagnosticsReport:
    """Term-by-term evaluation of the indicator splitting of the level mass.

    Pointwise objects: h_i(x)^2 sums the squared components containing i
    (sizes capped at B), the large-coordinate indicator compares h_i(x) to
    epsilon, and the crowding indicator asks for fewer than M large
    coordinates. term1/term2/term3 are the three expectations the splitting
    bounds the level mass by; the Markov chain and the counting bound are
    the auxiliary inequalities the argument threads through. Indicator
    thresholds are evaluated in float64.
    """
    eps = float(epsilon)
    Mf = float(M)
    if not 0 < eps < Mf:
        raise DomainError("need 0 < epsilon < M")
    if B < 1:
        raise DomainError("size cap must be at least 1")
    if f.n > DIAGNOSTICS_MAX_N:
        raise DomainError(f"diagnostics capped at n <= {DIAGNOSTICS_MAX_N}")
    base = _diag_base(f, measure, min(B, f.n))
    n = base.n
    size = 1 << n
    epssq = eps * eps
    eta = base.H > epssq
    counts = eta.sum(axis=1)
    xi = counts < Mf
    not_xi = ~xi
    term1 = float(np.dot(base.masses, base.hsq * not_xi))
    term2 = float(np.dot(base.masses, (base.H * ~eta).sum(axis=1)))

    shifts = np.uint32(1) << np.arange(n, dtype=np.uint32)
    mx = (eta.astype(np.uint32) * shifts).sum(axis=1).astype(np.uint32)
    t3 = np.zeros(size)
    counting_ok = True
    m_pow = Fraction(Mf) ** min(B, n)
    for start in range(0, size, 1 << _FULL_MATRIX_MAX_N):
        stop = min(start + (1 << _FULL_MATRIX_MAX_N), size)
        rows = base.rows(start, stop)
        for x in range(start, stop):
            if not xi[x]:
                continue
            allowed = ((base.sidx & ~mx[x]) == 0) & base.keep_pos
            t3[x] = rows[x - start, allowed].sum()
            msize = int(counts[x])
            ccount = sum(comb(msize, k) for k in range(1, min(base.cap, msize) + 1))
            if not ccount < m_pow:
                counting_ok = False
    term3 = float(np.dot(base.masses, t3))

    mean_eta = float(np.dot(base.masses, counts.astype(np.float64)))
    mean_not_xi = float(np.dot(base.masses, not_xi.astype(np.float64)))
    sum_h2 = float(np.dot(base.masses, base.H.sum(axis=1)))
    links = (
        mean_not_xi,
        mean_eta / Mf,
        sum_h2 / (Mf * epssq),
        base.total_influence / (Mf * epssq),
    )
    markov_ok = all(links[i] <= links[i + 1] + 1e-12 for i in range(3))
    split_ok = base.level_mass <= term1 + term2 + term3 + 1e-9
    h4 = float(np.dot(base.masses, base.hsq * base.hsq)) ** 0.25
    return DiagnosticsReport(
        B=B,
        epsilon=eps,
        M=Mf,
        coordinate_second_moments=base.coord_second,
        mean_eta_sum=mean_eta,
        mean_one_minus_xi=mean_not_xi,
        term1=term1,
        term2=term2,
        term3=term3,
        level_mass=base.level_mass,
        split_ok=split_ok,
        markov_links=links,
        markov_ok=markov_ok,
        counting_bound_ok=counting_ok,
        h4_norm=h4,
        holder_q=4 / 3,
        holder_q_prime=4.0,
    )
