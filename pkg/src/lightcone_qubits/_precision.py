"""Helpers for running the state algebra in mpmath precision.

Arrays of ``mpmath.mpf``/``mpc`` objects (numpy ``dtype=object``) flow
through the same code paths as float64 arrays. Only the few operations
that numpy cannot perform on object arrays branch on :func:`is_mp`.
"""

from __future__ import annotations

import mpmath
import numpy as np

DEFAULT_DPS = 40

_MP_TYPES = (mpmath.mpf, mpmath.mpc)


def is_mp(x) -> bool:
    if isinstance(x, np.ndarray):
        return x.dtype == object
    return isinstance(x, _MP_TYPES)


def to_mp(a) -> np.ndarray:
    """Object array of mpf (real input) or mpc (complex input) at the current precision."""
    a = np.asarray(a)
    if a.dtype == object:
        return a.copy()
    conv = mpmath.mpc if np.iscomplexobj(a) else mpmath.mpf
    out = np.empty(a.shape, dtype=object)
    for idx, v in np.ndenumerate(a):
        out[idx] = conv(v)
    return out


def to_float(a, complex_=False) -> np.ndarray:
    """Round an object array back to float64 (or complex128)."""
    a = np.asarray(a)
    if a.dtype != object:
        return a.astype(complex if complex_ else float)
    conv = complex if complex_ else float
    out = np.empty(a.shape, dtype=complex if complex_ else float)
    for idx, v in np.ndenumerate(a):
        out[idx] = conv(v)
    return out


def exp(x):
    return mpmath.exp(x) if isinstance(x, _MP_TYPES) else np.exp(x)


def all_finite(a) -> bool:
    a = np.asarray(a)
    if a.dtype != object:
        return bool(np.all(np.isfinite(a)))
    return all(mpmath.isfinite(v) for v in a.flat)
