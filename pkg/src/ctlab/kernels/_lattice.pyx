# cython: boundscheck=False, wraparound=False, cdivision=True
# Compiled subset-lattice kernels. Must stay bit-identical to the numpy
# reference backend: same per-element operation order, no FP contraction
# (enforced by -ffp-contract=off in the build flags).

from libc.math cimport fabs
from libc.stdlib cimport free, malloc
from libc.string cimport memcpy

import numpy as np


cdef void _butterfly_raw(double* v, int n, double p, double q, double s) noexcept nogil:
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    cdef Py_ssize_t i, j, base, step
    cdef double lo, hi
    for i in range(n):
        step = (<Py_ssize_t>1) << i
        j = 0
        while j < size:
            for base in range(j, j + step):
                lo = v[base]
                hi = v[base + step]
                v[base] = q * lo + p * hi
                v[base + step] = s * (hi - lo)
            j += 2 * step


cdef void _zeta_raw(double* w, int n, double r0, double r1, unsigned int xbits) noexcept nogil:
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    cdef Py_ssize_t i, j, base, step
    cdef double r
    for i in range(n):
        r = r1 if (xbits >> i) & 1 else r0
        step = (<Py_ssize_t>1) << i
        j = 0
        while j < size:
            for base in range(j, j + step):
                w[base + step] = r * w[base + step] + w[base]
            j += 2 * step


def butterfly(double[::1] values, int n, double p, double q, double s):
    """In-place coefficient transform of a float64 array of length 2^n."""
    with nogil:
        _butterfly_raw(&values[0], n, p, q, s)


def zeta_point(const double[::1] coeffs, int n, double r0, double r1, unsigned int xbits):
    """All conditional averages at one point; returns a fresh length-2^n array."""
    out = np.array(coeffs, dtype=np.float64, copy=True)
    cdef double[::1] w = out
    with nogil:
        _zeta_raw(&w[0], n, r0, r1, xbits)
    return out


def junta_stats_block(const double[::1] coeffs, int n, double r0, double r1,
                      unsigned int[::1] xs, long long[::1] sel,
                      double[::1] out, Py_ssize_t start, Py_ssize_t stop):
    """out[k] = max over sel of |zeta at xs[k]| for k in [start, stop).

    Releases the GIL; disjoint [start, stop) ranges can run on separate
    threads writing to a shared out array.
    """
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    cdef Py_ssize_t nsel = sel.shape[0]
    cdef Py_ssize_t k, t
    cdef double best, v
    cdef double* scratch = <double*> malloc(size * sizeof(double))
    if scratch == NULL:
        raise MemoryError()
    try:
        with nogil:
            for k in range(start, stop):
                memcpy(scratch, &coeffs[0], size * sizeof(double))
                _zeta_raw(scratch, n, r0, r1, xs[k])
                best = 0.0
                for t in range(nsel):
                    v = fabs(scratch[sel[t]])
                    if v > best:
                        best = v
                out[k] = best
    finally:
        free(scratch)
