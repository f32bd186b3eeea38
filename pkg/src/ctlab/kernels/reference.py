"""Pure-numpy backend for the subset-lattice kernels.

Both backends must produce bit-identical float64 output: every kernel
performs, per element, the multiplications and additions in the same order
as the compiled loops (the extension is built with FP contraction off), so
golden files and cross-backend tests can compare exactly.

Kernels:

* butterfly: turns a table of function values indexed by point into the
  table of basis coefficients indexed by subset. One pass per coordinate,
  ascending; each pass maps the pair (a0, a1) = (bit clear, bit set) to
  (q*a0 + p*a1, s*(a1 - a0)) with s = sqrt(p*q).
* zeta_point: given the coefficient table and a point x, produces the table
  of all conditional averages onto subsets, work[S] = sum over J subset of S
  of coeff[J] * prod_{i in J} r(x_i), by folding the factor r(x_i) into a
  subset-sum pass per coordinate: work[S+i] = r_i*work[S+i] + work[S].
* junta_stats_block: zeta_point per sample plus a max-abs reduction over a
  fixed subset selection; used by the Monte-Carlo estimator.
"""

from __future__ import annotations

import numpy as np

# cap on blk * 2^n so batched scratch stays a few megabytes per worker
_BATCH_ELEMENTS = 1 << 19


def butterfly(values: np.ndarray, n: int, p: float, q: float, s: float) -> None:
    """In-place transform of a float64 array of length 2^n."""
    for i in range(n):
        view = values.reshape(-1, 2, 1 << i)
        a0 = view[:, 0, :]
        a1 = view[:, 1, :]
        new0 = q * a0 + p * a1
        new1 = s * (a1 - a0)
        view[:, 0, :] = new0
        view[:, 1, :] = new1


def zeta_point(coeffs: np.ndarray, n: int, r0: float, r1: float, xbits: int) -> np.ndarray:
    """All conditional averages at one point; returns a fresh length-2^n array."""
    work = coeffs.copy()
    for i in range(n):
        view = work.reshape(-1, 2, 1 << i)
        r = r1 if (xbits >> i) & 1 else r0
        view[:, 1, :] = r * view[:, 1, :] + view[:, 0, :]
    return work


def junta_stats_block(
    coeffs: np.ndarray,
    n: int,
    r0: float,
    r1: float,
    xs: np.ndarray,
    sel: np.ndarray,
    out: np.ndarray,
    start: int,
    stop: int,
) -> None:
    """out[k] = max over sel of |zeta_point(coeffs, xs[k])[sel]| for k in [start, stop)."""
    size = 1 << n
    blk = max(1, _BATCH_ELEMENTS // size)
    k = start
    while k < stop:
        m = min(blk, stop - k)
        chunk = xs[k : k + m]
        work = np.broadcast_to(coeffs, (m, size)).copy()
        for i in range(n):
            view = work.reshape(m, -1, 2, 1 << i)
            rvals = np.where((chunk >> np.uint32(i)) & np.uint32(1), r1, r0)
            view[:, :, 1, :] = rvals[:, None, None] * view[:, :, 1, :] + view[:, :, 0, :]
        out[k : k + m] = np.abs(work[:, sel]).max(axis=1)
        k += m
