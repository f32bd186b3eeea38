"""Kernel backend selection.

The compiled extension is preferred; the numpy reference backend is the
fallback when the build was skipped. Both produce bit-identical float64
results, so nothing downstream depends on which one loaded. Set
CTLAB_FORCE_REFERENCE=1 to skip the extension (used by the benchmark and
the cross-backend tests).
"""

from __future__ import annotations

import os

import numpy as np

from . import reference

if os.environ.get("CTLAB_FORCE_REFERENCE") == "1":
    _impl = reference
    _backend = "reference"
else:
    try:
        from . import _lattice as _impl  # type: ignore[no-redef]

        _backend = "compiled"
    except ImportError:
        _impl = reference
        _backend = "reference"


def backend_name() -> str:
    return _backend


def butterfly(values: np.ndarray, n: int, p: float, q: float, s: float) -> None:
    _impl.butterfly(values, n, p, q, s)


def zeta_point(coeffs: np.ndarray, n: int, r0: float, r1: float, xbits: int) -> np.ndarray:
    return np.asarray(_impl.zeta_point(coeffs, n, r0, r1, xbits))


def junta_stats_block(coeffs, n, r0, r1, xs, sel, out, start, stop) -> None:
    _impl.junta_stats_block(coeffs, n, r0, r1, xs, sel, out, start, stop)
