"""Finite product probability spaces and explicit +-1 truth tables.

Conventions, fixed once for the whole package and for the BFT1 file format:

* A point of the discrete cube is a vector x in {0,1}^n. Coordinate 1 is
  the least significant bit of its table index, i.e. index(x) = sum_j
  x_j * 2^(j-1).
* Function values are exactly -1 or +1. A truth table is a Python integer
  bit mask of length 2^n; a set bit means value +1.
* Probability-side arithmetic is exact: p, q and every mass, expectation
  or influence derived from them is a `fractions.Fraction`.

The n <= 24 cap keeps tables at or below 2 MiB of mask (16 MiB of unpacked
float signs); general alphabets are capped at |Omega|^n <= 2^20.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb

import numpy as np

from .errors import DomainError

MAX_N = 24
MAX_GENERAL_POINTS = 1 << 20


def as_fraction(value) -> Fraction:
    """Exact conversion to Fraction; floats are rejected to avoid silent
    binary-rounding surprises on the exact paths."""
    if isinstance(value, float):
        raise DomainError(
            "probabilities must be exact rationals; pass a Fraction or an 'a/b' string"
        )
    return Fraction(value)


class BiasedMeasure:
    """Bernoulli measure on {0,1}: mass p on 1 and q = 1 - p on 0."""

    __slots__ = ("p", "q")

    def __init__(self, p):
        p = as_fraction(p)
        if not 0 < p < 1:
            raise DomainError(f"bias must satisfy 0 < p < 1, got {p}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", 1 - p)

    def __setattr__(self, name, value):
        raise AttributeError("BiasedMeasure is immutable")

    def __eq__(self, other):
        return isinstance(other, BiasedMeasure) and self.p == other.p

    def __hash__(self):
        return hash(("BiasedMeasure", self.p))

    def __repr__(self):
        return f"BiasedMeasure({self.p})"


def make_biased_measure(p) -> BiasedMeasure:
    return BiasedMeasure(p)


def point_mass(measure: BiasedMeasure, x) -> Fraction:
    """Product mass p^(#ones) * q^(#zeros) of a point given as a 0/1 vector."""
    ones = 0
    n = 0
    for b in x:
        if b not in (0, 1):
            raise DomainError("points must have 0/1 coordinates")
        ones += b
        n += 1
    return measure.p**ones * measure.q ** (n - ones)


def index_of_point(x) -> int:
    idx = 0
    for j, b in enumerate(x):
        if b:
            idx |= 1 << j
    return idx


def point_of_index(idx: int, n: int) -> tuple[int, ...]:
    return tuple((idx >> j) & 1 for j in range(n))


class BooleanFunction:
    """Truth table over {0,1}^n with values in {-1,+1}.

    Immutable; numpy views and weight-class counts are cached lazily and
    shared freely across threads.
    """

    __slots__ = ("n", "table", "_signs", "_plus_weight_counts", "_monotone")

    def __init__(self, n: int, table: int):
        if not 1 <= n <= MAX_N:
            raise DomainError(f"need 1 <= n <= {MAX_N}, got n={n}")
        size = 1 << n
        if not 0 <= table < (1 << size):
            raise DomainError(f"table must be a bit mask of length 2^{n}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "_signs", None)
        object.__setattr__(self, "_plus_weight_counts", None)
        object.__setattr__(self, "_monotone", None)

    def __setattr__(self, name, value):
        raise AttributeError("BooleanFunction is immutable")

    @classmethod
    def from_values(cls, values) -> "BooleanFunction":
        vals = list(values)
        size = len(vals)
        n = size.bit_length() - 1
        if size != 1 << n or n < 1:
            raise DomainError("value list length must be 2^n with n >= 1")
        table = 0
        for i, v in enumerate(vals):
            if v == 1:
                table |= 1 << i
            elif v != -1:
                raise DomainError(f"values must be -1 or +1, got {v!r}")
        return cls(n, table)

    @classmethod
    def from_index_predicate(cls, n: int, pred) -> "BooleanFunction":
        """pred(index) truthy <=> value +1."""
        table = 0
        for i in range(1 << n):
            if pred(i):
                table |= 1 << i
        return cls(n, table)

    @classmethod
    def from_plus_mask(cls, n: int, mask: np.ndarray) -> "BooleanFunction":
        """Boolean numpy array (True <=> +1) -> function."""
        packed = np.packbits(mask.astype(np.uint8), bitorder="little").tobytes()
        return cls(n, int.from_bytes(packed, "little"))

    def value_at(self, index: int) -> int:
        return 1 if (self.table >> index) & 1 else -1

    def __call__(self, x) -> int:
        return self.value_at(index_of_point(x))

    def __eq__(self, other):
        return (
            isinstance(other, BooleanFunction)
            and self.n == other.n
            and self.table == other.table
        )

    def __hash__(self):
        return hash(("BooleanFunction", self.n, self.table))

    def __repr__(self):
        return f"BooleanFunction(n={self.n})"

    def plus_mask(self) -> np.ndarray:
        """Boolean array, True where f = +1."""
        raw = self.table.to_bytes((1 << self.n) // 8 or 1, "little")
        bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
        return bits[: 1 << self.n].astype(bool)

    def signs(self) -> np.ndarray:
        """Float64 array of the +-1 values, index = point index. Cached."""
        if self._signs is None:
            s = np.where(self.plus_mask(), 1.0, -1.0)
            s.setflags(write=False)
            object.__setattr__(self, "_signs", s)
        return self._signs

    def plus_weight_counts(self) -> tuple[int, ...]:
        """Number of +1 points at each Hamming weight 0..n. Cached."""
        if self._plus_weight_counts is None:
            idx = np.arange(1 << self.n, dtype=np.uint32)
            weights = np.bitwise_count(idx).astype(np.int64)
            counts = np.bincount(weights[self.plus_mask()], minlength=self.n + 1)
            object.__setattr__(self, "_plus_weight_counts", tuple(int(c) for c in counts))
        return self._plus_weight_counts


def expectation(f: BooleanFunction, measure: BiasedMeasure) -> Fraction:
    """E[f] under the product measure, exact.

    Grouped by Hamming weight: E = sum_k (2 c_k - C(n,k)) p^k q^(n-k) with
    c_k the number of +1 points of weight k.
    """
    n = f.n
    p, q = measure.p, measure.q
    total = Fraction(0)
    for k, c in enumerate(f.plus_weight_counts()):
        total += (2 * c - comb(n, k)) * p**k * q ** (n - k)
    return total


def probability_plus(f: BooleanFunction, measure: BiasedMeasure) -> Fraction:
    """P[f = +1], exact."""
    n = f.n
    p, q = measure.p, measure.q
    return sum(
        (c * p**k * q ** (n - k) for k, c in enumerate(f.plus_weight_counts())),
        Fraction(0),
    )


def is_monotone(f: BooleanFunction) -> bool:
    """True iff f(x) <= f(y) for every comparable pair.

    Checked on the n * 2^(n-1) covering edges of the cube; result cached.
    """
    if f._monotone is None:
        plus = f.plus_mask()
        ok = True
        for i in range(f.n):
            shaped = plus.reshape(-1, 2, 1 << i)
            lo, hi = shaped[:, 0, :], shaped[:, 1, :]
            if not np.all(hi | ~lo):
                ok = False
                break
        object.__setattr__(f, "_monotone", ok)
    return f._monotone


# ---------------------------------------------------------------------------
# BFT1 truth-table files
#
# Line 1: literal "bft 1"
# Line 2: n in decimal
# Line 3: the 2^n table bits as lowercase hex, 4 bits per digit, least
#         significant bit first within each nibble, zero-padded to a whole
#         number of digits. Nibble k holds bits 4k..4k+3.
# ---------------------------------------------------------------------------


def dumps_bft(f: BooleanFunction) -> str:
    size = 1 << f.n
    digits = (size + 3) // 4
    hexed = "".join(format((f.table >> (4 * k)) & 0xF, "x") for k in range(digits))
    return f"bft 1\n{f.n}\n{hexed}\n"


def loads_bft(text: str) -> BooleanFunction:
    lines = text.splitlines()
    if len(lines) < 3 or lines[0].strip() != "bft 1":
        raise DomainError("not a BFT1 file (missing 'bft 1' header)")
    try:
        n = int(lines[1].strip())
    except ValueError as exc:
        raise DomainError("BFT1 line 2 must be a decimal coordinate count") from exc
    if not 1 <= n <= MAX_N:
        raise DomainError(f"BFT1 n out of range: {n}")
    hexed = lines[2].strip()
    size = 1 << n
    expected_digits = (size + 3) // 4
    if len(hexed) != expected_digits:
        raise DomainError(
            f"BFT1 table has {len(hexed)} hex digits, expected {expected_digits}"
        )
    table = 0
    for k, ch in enumerate(hexed):
        try:
            nib = int(ch, 16)
        except ValueError as exc:
            raise DomainError(f"invalid hex digit {ch!r} in BFT1 table") from exc
        if ch != format(nib, "x"):
            raise DomainError("BFT1 hex digits must be lowercase")
        table |= nib << (4 * k)
    if table >> size:
        raise DomainError("BFT1 padding bits must be zero")
    return BooleanFunction(n, table)


def save_bft(f: BooleanFunction, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(dumps_bft(f))


def load_bft(path) -> BooleanFunction:
    with open(path, "r", encoding="ascii") as fh:
        return loads_bft(fh.read())


# ---------------------------------------------------------------------------
# General finite product spaces (small alphabets)
# ---------------------------------------------------------------------------


class GeneralProductSpace:
    """n-fold product of a finite probability space with 2..4 symbols.

    Points are tuples over range(alphabet_size); the mixed-radix table index
    has coordinate 1 as the least significant digit.
    """

    __slots__ = ("alphabet_size", "weights", "n")

    def __init__(self, weights, n: int):
        weights = tuple(as_fraction(w) for w in weights)
        m = len(weights)
        if not 2 <= m <= 4:
            raise DomainError("alphabet size must be between 2 and 4")
        if any(w <= 0 for w in weights):
            raise DomainError("all symbol weights must be positive")
        if sum(weights) != 1:
            raise DomainError("symbol weights must sum to 1 exactly")
        if n < 1 or m**n > MAX_GENERAL_POINTS:
            raise DomainError(f"need 1 <= n with {m}^n <= 2^20")
        if m > 2 and n > 10:
            raise DomainError("n <= 10 required for alphabets larger than 2")
        object.__setattr__(self, "alphabet_size", m)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "n", n)

    def __setattr__(self, name, value):
        raise AttributeError("GeneralProductSpace is immutable")

    def size(self) -> int:
        return self.alphabet_size**self.n

    def index_of(self, x) -> int:
        idx = 0
        for j, s in enumerate(x):
            if not 0 <= s < self.alphabet_size:
                raise DomainError(f"symbol {s!r} outside alphabet")
            idx += s * self.alphabet_size**j
        return idx

    def point_of(self, idx: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.n):
            idx, r = divmod(idx, self.alphabet_size)
            out.append(r)
        return tuple(out)

    def point_mass(self, x) -> Fraction:
        mass = Fraction(1)
        for s in x:
            mass *= self.weights[s]
        return mass


class GeneralFunction:
    """Explicit +-1 table over a GeneralProductSpace."""

    __slots__ = ("space", "values")

    def __init__(self, space: GeneralProductSpace, values):
        values = tuple(values)
        if len(values) != space.size():
            raise DomainError("table length must be |alphabet|^n")
        if any(v not in (-1, 1) for v in values):
            raise DomainError("values must be -1 or +1")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "values", values)

    def __setattr__(self, name, value):
        raise AttributeError("GeneralFunction is immutable")

    def __call__(self, x) -> int:
        return self.values[self.space.index_of(x)]


def general_expectation(g: GeneralFunction, S, x) -> Fraction:
    """Conditional expectation E[g | x_S], averaging coordinates outside S.

    S is an iterable of 1-based coordinates (or a bitmask); x supplies at
    least the coordinates in S. S = all coordinates returns g(x); S = empty
    returns E[g]. Exact.
    """
    space = g.space
    n = space.n
    if isinstance(S, int):
        fixed = [i for i in range(n) if (S >> i) & 1]
    else:
        fixed = sorted(set(i - 1 for i in S))
        if any(not 0 <= i < n for i in fixed):
            raise DomainError("S must be a subset of the coordinates")
    free = [i for i in range(n) if i not in fixed]
    x = tuple(x)
    point = [0] * n
    for i in fixed:
        point[i] = x[i]
    total = Fraction(0)
    for assignment in itertools.product(range(space.alphabet_size), repeat=len(free)):
        mass = Fraction(1)
        for i, s in zip(free, assignment):
            point[i] = s
            mass *= space.weights[s]
        total += mass * g.values[space.index_of(point)]
    return total
