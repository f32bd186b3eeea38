"""Subset-as-bitmask helpers shared across modules.

A subset S of coordinates {1..n} is encoded as the integer with bit i-1 set
for each i in S, matching the truth-table index convention (coordinate 1 is
the least significant bit).
"""

from __future__ import annotations

import numpy as np


def popcount(mask: int) -> int:
    return mask.bit_count()


def subset_to_coords(mask: int) -> tuple[int, ...]:
    """Bitmask -> sorted 1-based coordinate tuple."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def coords_to_subset(coords) -> int:
    mask = 0
    for c in coords:
        mask |= 1 << (c - 1)
    return mask


def submasks(mask: int):
    """All submasks of `mask`, ascending numeric order, empty set included."""
    subs = []
    sub = 0
    while True:
        subs.append(sub)
        if sub == mask:
            break
        sub = (sub - mask) & mask
    return subs


def masks_by_size_then_value(n: int, max_size: int):
    """Subset masks of [n] ordered by (popcount, numeric value)."""
    groups = [[] for _ in range(n + 1)]
    for m in range(1 << n):
        k = m.bit_count()
        if k <= max_size:
            groups[k].append(m)
    out = []
    for g in groups[: max_size + 1]:
        out.extend(g)
    return out


def compress_index(x: int, mask: int) -> int:
    """Extract the bits of x selected by mask, packed densely (pext)."""
    out = 0
    r = 0
    while mask:
        low = mask & -mask
        if x & low:
            out |= 1 << r
        mask &= mask - 1
        r += 1
    return out


def popcounts_array(n: int) -> np.ndarray:
    """popcount of every index in [0, 2^n), as uint8."""
    idx = np.arange(1 << n, dtype=np.uint32)
    return np.bitwise_count(idx).astype(np.uint8)
