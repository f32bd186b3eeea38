"""Coordinate operators, influences, and threshold analysis.

Influence conventions, all for functions with values in {-1,+1}:

    E_i f (x)  = p f(x with bit i set) + q f(x with bit i clear)
    L_i f      = f - E_i f
    Inf_i      = <L_i f, L_i f> = <f, L_i f> = 4pq P[coordinate i pivotal]
    I[f]       = sum_i Inf_i

The last equality of the first chain holds because L_i f is +-2q or -+2p on
the two points of a pivotal pair and zero elsewhere. The threshold
polynomial is P(p) = P[f = +1] with exact integer coefficients, so the
derivative identity 4pq P'(p) = I[f] for monotone f can be tested as exact
rational equality. A flag also surfaces the 0/1-range normalization
pq P'(p) = I[f]/4, which is the same identity for (1+f)/2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .bits import popcounts_array
from .errors import DomainError, NoRootError, NotMonotoneError
from .spaces import BiasedMeasure, BooleanFunction, is_monotone


def _check_coord(f: BooleanFunction, i: int) -> None:
    if not 1 <= i <= f.n:
        raise DomainError(f"coordinate {i} outside 1..{f.n}")


def expectation_operator(f: BooleanFunction, i: int, measure: BiasedMeasure):
    """Table of E_i f as exact rationals, index = point index."""
    _check_coord(f, i)
    bit = 1 << (i - 1)
    p, q = measure.p, measure.q
    return tuple(
        p * f.value_at(x | bit) + q * f.value_at(x & ~bit) for x in range(1 << f.n)
    )


def laplacian(f: BooleanFunction, i: int, measure: BiasedMeasure):
    """Table of f - E_i f as exact rationals."""
    ef = expectation_operator(f, i, measure)
    return tuple(f.value_at(x) - ef[x] for x in range(1 << f.n))


def inner_product(table_a, table_b, measure: BiasedMeasure, n: int) -> Fraction:
    """<a, b> under the product measure; exact."""
    p, q = measure.p, measure.q
    mass = [p**k * q ** (n - k) for k in range(n + 1)]
    pc = popcounts_array(n)
    total = Fraction(0)
    for x in range(1 << n):
        total += mass[pc[x]] * table_a[x] * table_b[x]
    return total


def pivotal_weight_counts(f: BooleanFunction, i: int) -> tuple[int, ...]:
    """Count, per weight k of the other coordinates, of assignments where
    flipping coordinate i changes f. Index k runs 0..n-1."""
    _check_coord(f, i)
    n = f.n
    low_bits = i - 1
    view = f.plus_mask().reshape(-1, 2, 1 << low_bits)
    differ = view[:, 0, :] != view[:, 1, :]
    pc_high = popcounts_array(n - i).astype(np.int64)
    pc_low = popcounts_array(low_bits).astype(np.int64)
    weights = pc_high[:, None] + pc_low[None, :]
    counts = np.bincount(weights[differ], minlength=n)
    return tuple(int(c) for c in counts[:n])


def pivotal_probability(f: BooleanFunction, i: int, measure: BiasedMeasure) -> Fraction:
    p, q = measure.p, measure.q
    n = f.n
    counts = pivotal_weight_counts(f, i)
    total = Fraction(0)
    for k, c in enumerate(counts):
        if c:
            total += c * p**k * q ** (n - 1 - k)
    return total


def influence(f: BooleanFunction, i: int, measure: BiasedMeasure) -> Fraction:
    """Inf_i as 4pq times the pivotal probability; exact."""
    return 4 * measure.p * measure.q * pivotal_probability(f, i, measure)


def influence_quadratic(f: BooleanFunction, i: int, measure: BiasedMeasure) -> Fraction:
    """Inf_i as <L_i f, L_i f> from the explicit table; the slow exact route."""
    lap = laplacian(f, i, measure)
    return inner_product(lap, lap, measure, f.n)


def influence_spectral(spec, i: int) -> float:
    """Sum of squared coefficients over subsets containing i."""
    if not 1 <= i <= spec.n:
        raise DomainError(f"coordinate {i} outside 1..{spec.n}")
    idx = np.arange(1 << spec.n, dtype=np.uint32)
    sel = (idx >> np.uint32(i - 1)) & np.uint32(1) == 1
    c = spec.coeffs[sel]
    return float(np.dot(c, c))


def total_influence(f: BooleanFunction, measure: BiasedMeasure) -> Fraction:
    return sum((influence(f, i, measure) for i in range(1, f.n + 1)), Fraction(0))


def total_influence_spectral(spec) -> float:
    sizes = popcounts_array(spec.n).astype(np.float64)
    return float(np.dot(sizes, spec.coeffs * spec.coeffs))


class ThresholdPolynomial:
    """P(p) = P[f = +1] in the monomial basis, exact integer coefficients."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs):
        coeffs = tuple(Fraction(c) for c in coeffs)
        if n < 0 or len(coeffs) != n + 1:
            raise DomainError("polynomial must carry exactly n + 1 coefficients")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("ThresholdPolynomial is immutable")

    @classmethod
    def from_function(cls, f: BooleanFunction) -> "ThresholdPolynomial":
        # P(p) = sum_k c_k p^k (1-p)^(n-k); expand the (1-p) powers
        n = f.n
        c = f.plus_weight_counts()
        coeffs = [0] * (n + 1)
        for m in range(n + 1):
            acc = 0
            for k in range(m + 1):
                if c[k]:
                    sign = -1 if (m - k) % 2 else 1
                    acc += sign * c[k] * comb(n - k, m - k)
            coeffs[m] = acc
        return cls(n, coeffs)

    def evaluate(self, p) -> Fraction:
        p = Fraction(p)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * p + c
        return acc

    def derivative_coeffs(self) -> tuple[Fraction, ...]:
        return tuple(k * self.coeffs[k] for k in range(1, self.n + 1))

    def derivative_at(self, p) -> Fraction:
        p = Fraction(p)
        acc = Fraction(0)
        for c in reversed(self.derivative_coeffs()):
            acc = acc * p + c
        return acc


def threshold_polynomial(f: BooleanFunction) -> ThresholdPolynomial:
    return ThresholdPolynomial.from_function(f)


@dataclass(frozen=True, slots=True)
class RussoReport:
    p: Fraction
    lhs: Fraction              # 4pq P'(p)
    rhs: Fraction              # total influence, +-1 range
    equal: bool
    ratio: Fraction | None
    lhs_unit_range: Fraction   # pq P'(p)
    rhs_unit_range: Fraction   # total influence of (1+f)/2


def margulis_russo_check(f: BooleanFunction, measure: BiasedMeasure) -> RussoReport:
    """Exact both-sides evaluation of the derivative identity; monotone only."""
    if not is_monotone(f):
        raise NotMonotoneError(
            "the derivative identity needs every pivotal flip to move f the "
            "same direction; input is not monotone"
        )
    p, q = measure.p, measure.q
    deriv = threshold_polynomial(f).derivative_at(p)
    lhs = 4 * p * q * deriv
    rhs = total_influence(f, measure)
    return RussoReport(
        p=p,
        lhs=lhs,
        rhs=rhs,
        equal=lhs == rhs,
        ratio=(lhs / rhs) if rhs else None,
        lhs_unit_range=p * q * deriv,
        rhs_unit_range=rhs / 4,
    )


_BRACKET_EDGE = Fraction(1, 1 << 20)


def critical_probability(f: BooleanFunction, tolerance=Fraction(1, 10**12)) -> Fraction:
    """Bias where P[f = +1] crosses 1/2, by bisection on the exact polynomial.

    Monotone non-constant functions only; the bracket starts at
    [2^-20, 1 - 2^-20] and must show a sign change of P - 1/2.
    """
    if not is_monotone(f):
        raise NotMonotoneError("bisection on P(p) - 1/2 assumes monotone f")
    tol = Fraction(tolerance)
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    poly = threshold_polynomial(f)
    lo = _BRACKET_EDGE
    hi = 1 - _BRACKET_EDGE
    half = Fraction(1, 2)
    flo = poly.evaluate(lo) - half
    fhi = poly.evaluate(hi) - half
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if flo > 0 or fhi < 0:
        raise NoRootError(
            "P(p) - 1/2 does not change sign on the bracket; the function is "
            "constant or effectively one-sided"
        )
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if poly.evaluate(mid) < half:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2
