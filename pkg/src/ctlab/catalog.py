"""Named Boolean function families built from compact spec strings.

Grammar: `family:param,param,...` with integer parameters, lowercase
canonical form. `table:<path>` loads a BFT1 file (the path keeps its case).

Families:

    dictator:n              n variables, value decided by coordinate 1
    and:n                   +1 iff all coordinates are 1
    or:n                    +1 iff some coordinate is 1
    majority:n              odd n, +1 iff more than half are 1
    parity:n                +1 iff an odd number of coordinates are 1
    threshold:n,k           +1 iff at least k coordinates are 1
    tribes:w,s              OR of s disjoint ANDs of width w; n = w*s;
                            tribe j owns coordinates (j-1)w+1 .. jw
    graph-triangle:v        v(v-1)/2 edge variables of a v-vertex graph,
                            +1 iff the edge set contains a triangle
    graph-connected:v       same variables, +1 iff the graph is connected
    random-monotone-dnf:n,t,w,seed
                            OR of t width-w terms with coordinates drawn
                            from a seeded deterministic generator
    table:<path>            explicit truth table from a BFT1 file

Graph families index edges lexicographically: (1,2),(1,3),...,(1,v),(2,3),...
Vertex count is capped at 7 (21 edge variables).
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, UsageError
from .rng import XorShift64Star, mix64
from .spaces import MAX_N, BooleanFunction, load_bft

MAX_GRAPH_VERTICES = 7


class FunctionSpec:
    """Parsed family name + integer parameters (or a table path)."""

    __slots__ = ("family", "params", "path")

    def __init__(self, family: str, params: tuple[int, ...] = (), path: str | None = None):
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "path", path)

    def __setattr__(self, name, value):
        raise AttributeError("FunctionSpec is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, FunctionSpec)
            and (self.family, self.params, self.path)
            == (other.family, other.params, other.path)
        )

    def __repr__(self):
        return f"FunctionSpec({canonical_name(self)!r})"


# family -> (min params, max params)
_ARITY = {
    "dictator": (1, 1),
    "and": (1, 1),
    "or": (1, 1),
    "majority": (1, 1),
    "parity": (1, 1),
    "threshold": (2, 2),
    "tribes": (2, 2),
    "graph-triangle": (1, 1),
    "graph-connected": (1, 1),
    "random-monotone-dnf": (4, 4),
}


def parse_spec(text: str) -> FunctionSpec:
    text = text.strip()
    if ":" not in text:
        raise UsageError(f"function spec needs 'family:params', got {text!r}")
    family, _, rest = text.partition(":")
    family = family.strip().lower()
    if family == "table":
        if not rest:
            raise UsageError("table spec needs a file path")
        return FunctionSpec("table", (), rest)
    if family not in _ARITY:
        raise UsageError(f"unknown function family {family!r}")
    lo, hi = _ARITY[family]
    parts = rest.split(",") if rest else []
    if not lo <= len(parts) <= hi:
        raise UsageError(
            f"{family} takes {lo if lo == hi else f'{lo}..{hi}'} parameters, got {len(parts)}"
        )
    try:
        params = tuple(int(s.strip(), 10) for s in parts)
    except ValueError as exc:
        raise UsageError(f"non-integer parameter in {text!r}") from exc
    if any(v < 0 for v in params):
        raise UsageError(f"negative parameter in {text!r}")
    return FunctionSpec(family, params)


def canonical_name(spec: FunctionSpec) -> str:
    if spec.family == "table":
        return f"table:{spec.path}"
    return f"{spec.family}:{','.join(str(v) for v in spec.params)}"


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_N:
        raise DomainError(f"variable count {n} outside 1..{MAX_N}")


def _indices(n: int) -> np.ndarray:
    return np.arange(1 << n, dtype=np.uint32)


def _weights(n: int) -> np.ndarray:
    return np.bitwise_count(_indices(n)).astype(np.int64)


def _edge_list(v: int) -> list[tuple[int, int]]:
    return [(a, b) for a in range(1, v) for b in range(a + 1, v + 1)]


def _build_graph(v: int) -> tuple[int, list[tuple[int, int]]]:
    if not 3 <= v <= MAX_GRAPH_VERTICES:
        raise DomainError(f"vertex count must be 3..{MAX_GRAPH_VERTICES}, got {v}")
    return v * (v - 1) // 2, _edge_list(v)


def _triangle_table(v: int) -> BooleanFunction:
    n, edges = _build_graph(v)
    edge_bit = {e: i for i, e in enumerate(edges)}
    idx = _indices(n)
    hit = np.zeros(1 << n, dtype=bool)
    for a in range(1, v - 1):
        for b in range(a + 1, v):
            for c in range(b + 1, v + 1):
                tri = (
                    (1 << edge_bit[(a, b)])
                    | (1 << edge_bit[(a, c)])
                    | (1 << edge_bit[(b, c)])
                )
                hit |= (idx & tri) == tri
    return BooleanFunction.from_plus_mask(n, hit)


def _connected_table(v: int) -> BooleanFunction:
    n, edges = _build_graph(v)
    idx = _indices(n)
    # reach[m] = bitmask of vertices reachable from vertex 1 in edge set m
    reach = np.ones(1 << n, dtype=np.uint8)
    for _ in range(v - 1):
        for e, (a, b) in enumerate(edges):
            present = ((idx >> np.uint32(e)) & 1).astype(bool)
            abit = np.uint8(1 << (a - 1))
            bbit = np.uint8(1 << (b - 1))
            has_a = (reach & abit).astype(bool)
            has_b = (reach & bbit).astype(bool)
            reach |= np.where(present & has_a, bbit, 0).astype(np.uint8)
            reach |= np.where(present & has_b, abit, 0).astype(np.uint8)
    full = np.uint8((1 << v) - 1)
    return BooleanFunction.from_plus_mask(n, reach == full)


def _random_dnf_table(n: int, t: int, w: int, seed: int) -> BooleanFunction:
    _check_n(n)
    if not 1 <= w <= n or t < 1:
        raise DomainError("need 1 <= w <= n and t >= 1")
    gen = XorShift64Star(mix64(seed) ^ (n * 0x10001 + t * 0x101 + w))
    idx = _indices(n)
    hit = np.zeros(1 << n, dtype=bool)
    for _ in range(t):
        # sample a w-subset without replacement
        pool = list(range(n))
        term = 0
        for j in range(w):
            k = gen.below(n - j)
            term |= 1 << pool.pop(k)
        term = np.uint32(term)
        hit |= (idx & term) == term
    return BooleanFunction.from_plus_mask(n, hit)


def build(spec: FunctionSpec | str) -> BooleanFunction:
    if isinstance(spec, str):
        spec = parse_spec(spec)
    fam, par = spec.family, spec.params

    if fam == "table":
        return load_bft(spec.path)
    if fam == "dictator":
        (n,) = par
        _check_n(n)
        return BooleanFunction.from_plus_mask(n, (_indices(n) & 1).astype(bool))
    if fam == "and":
        (n,) = par
        _check_n(n)
        return BooleanFunction.from_plus_mask(n, _indices(n) == (1 << n) - 1)
    if fam == "or":
        (n,) = par
        _check_n(n)
        return BooleanFunction.from_plus_mask(n, _indices(n) != 0)
    if fam == "majority":
        (n,) = par
        _check_n(n)
        if n % 2 == 0:
            raise DomainError(f"majority needs an odd variable count, got {n}")
        return BooleanFunction.from_plus_mask(n, _weights(n) > n // 2)
    if fam == "parity":
        (n,) = par
        _check_n(n)
        return BooleanFunction.from_plus_mask(n, _weights(n) % 2 == 1)
    if fam == "threshold":
        n, k = par
        _check_n(n)
        if not 0 <= k <= n + 1:
            raise DomainError(f"threshold level {k} outside 0..{n + 1}")
        return BooleanFunction.from_plus_mask(n, _weights(n) >= k)
    if fam == "tribes":
        w, s = par
        if w < 1 or s < 1:
            raise DomainError("tribes needs positive width and tribe count")
        n = w * s
        _check_n(n)
        idx = _indices(n)
        tribe_mask = np.uint32((1 << w) - 1)
        hit = np.zeros(1 << n, dtype=bool)
        for j in range(s):
            m = np.uint32(int(tribe_mask) << (j * w))
            hit |= (idx & m) == m
        return BooleanFunction.from_plus_mask(n, hit)
    if fam == "graph-triangle":
        return _triangle_table(par[0])
    if fam == "graph-connected":
        return _connected_table(par[0])
    if fam == "random-monotone-dnf":
        return _random_dnf_table(*par)
    raise UsageError(f"unknown function family {fam!r}")


def family_descriptions() -> list[dict]:
    """Catalog listing for the CLI: name, syntax, one-line description."""
    return [
        {"family": "dictator", "syntax": "dictator:n",
         "description": "n variables, value decided by coordinate 1"},
        {"family": "and", "syntax": "and:n",
         "description": "+1 iff all coordinates are 1"},
        {"family": "or", "syntax": "or:n",
         "description": "+1 iff some coordinate is 1"},
        {"family": "majority", "syntax": "majority:n",
         "description": "odd n; +1 iff more than half the coordinates are 1"},
        {"family": "parity", "syntax": "parity:n",
         "description": "+1 iff an odd number of coordinates are 1"},
        {"family": "threshold", "syntax": "threshold:n,k",
         "description": "+1 iff at least k coordinates are 1"},
        {"family": "tribes", "syntax": "tribes:w,s",
         "description": "OR of s disjoint ANDs of width w (n = w*s)"},
        {"family": "graph-triangle", "syntax": "graph-triangle:v",
         "description": "edge variables of a v-vertex graph; +1 iff a triangle exists"},
        {"family": "graph-connected", "syntax": "graph-connected:v",
         "description": "edge variables of a v-vertex graph; +1 iff connected"},
        {"family": "random-monotone-dnf", "syntax": "random-monotone-dnf:n,t,w,seed",
         "description": "OR of t seeded random width-w monotone terms"},
        {"family": "table", "syntax": "table:<path>",
         "description": "explicit truth table from a BFT1 file"},
    ]
