"""Orthogonal decomposition over the two-point basis and its general-space
counterpart.

The basis on a p-biased bit is r(0) = -sqrt(p/q), r(1) = sqrt(q/p), which is
mean zero and variance one under the measure. Coefficients are

    coeff(S) = E[f(x) * prod_{i in S} r(x_i)]

and the three derived objects are the component (coeff(S) times the basis
product), the conditional average onto S (sum of components over subsets of
S), and the inclusion-exclusion inverse recovering a component from
conditional averages.

Floats enter only through sqrt(pq); every conditional average also has an
exact-rational direct route, and the float-vs-exact agreement is the
correctness backbone of the test suite. All float constants are the
correctly rounded doubles of the exact rationals.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import kernels
from .bits import popcount, submasks
from .errors import DomainError
from .spaces import (
    BiasedMeasure,
    BooleanFunction,
    GeneralFunction,
    index_of_point,
)


def _as_mask(x, n: int) -> int:
    """Accept a point as an int bitmask or a 0/1 sequence."""
    if isinstance(x, int):
        if not 0 <= x < (1 << n):
            raise DomainError(f"point index {x} outside [0, 2^{n})")
        return x
    xs = tuple(x)
    if len(xs) != n:
        raise DomainError(f"point has {len(xs)} coordinates, expected {n}")
    return index_of_point(xs)


def _as_subset(S, n: int) -> int:
    """Accept a subset as an int bitmask or an iterable of 1-based coords."""
    if isinstance(S, int):
        mask = S
    else:
        mask = 0
        for c in S:
            mask |= 1 << (c - 1)
    if not 0 <= mask < (1 << n):
        raise DomainError("subset outside the coordinate range")
    return mask


def basis_value(measure: BiasedMeasure, bit: int) -> float:
    if bit == 0:
        return -math.sqrt(float(measure.p / measure.q))
    if bit == 1:
        return math.sqrt(float(measure.q / measure.p))
    raise DomainError("basis argument must be 0 or 1")


def basis_pair(measure: BiasedMeasure) -> tuple[float, float]:
    return basis_value(measure, 0), basis_value(measure, 1)


class Spectrum:
    """All 2^n coefficients of a function at a fixed bias, subset-indexed."""

    __slots__ = ("n", "measure", "coeffs", "r0", "r1")

    def __init__(self, n: int, measure: BiasedMeasure, coeffs: np.ndarray):
        coeffs = np.asarray(coeffs, dtype=np.float64)
        if coeffs.shape != (1 << n,):
            raise DomainError("coefficient table length must be 2^n")
        coeffs.setflags(write=False)
        r0, r1 = basis_pair(measure)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "measure", measure)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "r0", r0)
        object.__setattr__(self, "r1", r1)

    def __setattr__(self, name, value):
        raise AttributeError("Spectrum is immutable")

    def coefficient(self, S) -> float:
        return float(self.coeffs[_as_subset(S, self.n)])

    def parseval_sum(self) -> float:
        return float(np.dot(self.coeffs, self.coeffs))

    def basis_at(self, bit: int) -> float:
        return self.r1 if bit else self.r0

    def to_records(self) -> list[dict]:
        """Subset/coefficient records ordered by (size, numeric encoding)."""
        order = sorted(range(1 << self.n), key=lambda m: (popcount(m), m))
        out = []
        for m in order:
            coords = [i + 1 for i in range(self.n) if (m >> i) & 1]
            out.append({"subset": coords, "coefficient": float(self.coeffs[m])})
        return out


def transform(f: BooleanFunction, measure: BiasedMeasure) -> Spectrum:
    """All coefficients via the in-place butterfly, one pass per coordinate."""
    values = f.signs().copy()
    p = float(measure.p)
    q = float(measure.q)
    s = math.sqrt(float(measure.p * measure.q))
    kernels.butterfly(values, f.n, p, q, s)
    return Spectrum(f.n, measure, values)


def transform_naive(f: BooleanFunction, measure: BiasedMeasure) -> Spectrum:
    """Direct double sum over (subset, point); the O(4^n) oracle route."""
    if f.n > 10:
        raise DomainError("naive transform is capped at n <= 10")
    n = f.n
    r0, r1 = basis_pair(measure)
    signs = f.signs()
    masses = np.empty(1 << n)
    for x in range(1 << n):
        masses[x] = float(measure.p ** popcount(x) * measure.q ** (n - popcount(x)))
    coeffs = np.zeros(1 << n)
    for S in range(1 << n):
        acc = 0.0
        for x in range(1 << n):
            prod = 1.0
            m = S
            while m:
                low = m & -m
                prod *= r1 if x & low else r0
                m &= m - 1
            acc += masses[x] * signs[x] * prod
        coeffs[S] = acc
    return Spectrum(n, measure, coeffs)


def eval_component(spec: Spectrum, S, x) -> float:
    """coeff(S) times the basis product at x; depends on x only through x_S."""
    mask = _as_subset(S, spec.n)
    xb = _as_mask(x, spec.n)
    prod = 1.0
    m = mask
    while m:
        low = m & -m
        prod *= spec.r1 if xb & low else spec.r0
        m &= m - 1
    return float(spec.coeffs[mask]) * prod


def averaged_spectral(spec: Spectrum, S, x) -> float:
    """Conditional average onto S via the component sum over subsets of S."""
    mask = _as_subset(S, spec.n)
    xb = _as_mask(x, spec.n)
    return math.fsum(eval_component(spec, J, xb) for J in submasks(mask))


def averaged_direct(f: BooleanFunction, measure: BiasedMeasure, S, x) -> Fraction:
    """Conditional average onto S by exact summation over the complement."""
    mask = _as_subset(S, f.n)
    xb = _as_mask(x, f.n)
    comp = ((1 << f.n) - 1) & ~mask
    base = xb & mask
    csize = popcount(comp)
    p, q = measure.p, measure.q
    total = Fraction(0)
    for free in submasks(comp):
        k = popcount(free)
        total += p**k * q ** (csize - k) * f.value_at(base | free)
    return total


def component_by_mobius(f: BooleanFunction, measure: BiasedMeasure, S, x) -> Fraction:
    """Inclusion-exclusion over conditional averages; exact rational."""
    mask = _as_subset(S, f.n)
    xb = _as_mask(x, f.n)
    size = popcount(mask)
    total = Fraction(0)
    for J in submasks(mask):
        sign = -1 if (size - popcount(J)) % 2 else 1
        total += sign * averaged_direct(f, measure, J, xb)
    return total


def zeta_all(spec: Spectrum, x) -> np.ndarray:
    """Conditional averages onto every subset at one point, as one array.

    One fused subset-sum pass per coordinate over a scratch copy of the
    coefficients, cost n * 2^n.
    """
    xb = _as_mask(x, spec.n)
    return kernels.zeta_point(spec.coeffs, spec.n, spec.r0, spec.r1, xb)


def all_averaged_at_point(spec: Spectrum, x, B: int | None = None) -> dict[int, float]:
    """Map subset mask -> conditional average at x, for all |S| <= B."""
    cap = spec.n if B is None else min(B, spec.n)
    table = zeta_all(spec, x)
    return {
        S: float(table[S]) for S in range(1 << spec.n) if popcount(S) <= cap
    }


# ---------------------------------------------------------------------------
# General product spaces: conditional averages by lattice recursion and
# components by inclusion-exclusion (the only component route here; there is
# no product basis to factor through).
# ---------------------------------------------------------------------------


def general_averaged_tables(g: GeneralFunction) -> dict[int, tuple[Fraction, ...]]:
    """Exact table of the conditional average onto J, for every J.

    Tables are indexed by the full mixed-radix point index; the entry is
    constant along coordinates outside J. Built top-down: the average onto J
    is the weight-mix of the average onto J + {j} over the symbols of any
    missing coordinate j.
    """
    space = g.space
    n, m = space.n, space.alphabet_size
    size = space.size()
    full = (1 << n) - 1
    tables: dict[int, tuple[Fraction, ...]] = {
        full: tuple(Fraction(v) for v in g.values)
    }
    for J in range(full - 1, -1, -1):
        j = ((~J) & full).bit_length()  # highest missing coordinate, 1-based
        j -= 1
        parent = tables[J | (1 << j)]
        stride = m**j
        row: list[Fraction] = []
        for idx in range(size):
            base = idx - ((idx // stride) % m) * stride
            acc = Fraction(0)
            for sym in range(m):
                acc += space.weights[sym] * parent[base + sym * stride]
            row.append(acc)
        tables[J] = tuple(row)
    return tables


def general_components(g: GeneralFunction) -> dict[int, tuple[Fraction, ...]]:
    """Exact component tables for every subset, via inclusion-exclusion."""
    averaged = general_averaged_tables(g)
    size = g.space.size()
    out: dict[int, tuple[Fraction, ...]] = {}
    for S in averaged:
        k = popcount(S)
        acc = [Fraction(0)] * size
        for J in submasks(S):
            sign = -1 if (k - popcount(J)) % 2 else 1
            tab = averaged[J]
            for idx in range(size):
                acc[idx] += sign * tab[idx]
        out[S] = tuple(acc)
    return out


def general_component_at(g: GeneralFunction, S, x) -> Fraction:
    """Single component value by inclusion-exclusion; exact."""
    from .spaces import general_expectation

    n = g.space.n
    mask = _as_subset(S, n)
    k = popcount(mask)
    coords = [i + 1 for i in range(n) if (mask >> i) & 1]
    total = Fraction(0)
    for J in submasks(mask):
        sign = -1 if (k - popcount(J)) % 2 else 1
        Jcoords = [c for c in coords if (J >> (c - 1)) & 1]
        total += sign * general_expectation(g, Jcoords, x)
    return total


def general_inner(g: GeneralFunction, ta, tb) -> Fraction:
    """Exact inner product of two full-index tables under the product measure."""
    space = g.space
    total = Fraction(0)
    for idx in range(space.size()):
        total += space.point_mass(space.point_of(idx)) * ta[idx] * tb[idx]
    return total
