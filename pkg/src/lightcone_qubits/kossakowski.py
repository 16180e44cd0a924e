"""Dissipative rates of the two atoms and their Kossakowski matrices.

Atom 1 sits in the empty cavity, atom 2 in the disordered one. Cross-atom
terms vanish because the two cavity fields are independent.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass

import numpy as np

from .correlators import spectral_disorder_correction, spectral_free

logger = logging.getLogger(__name__)

CP_VALID = "CP-valid"
PAPER_EXTENDED = "paper-extended"
OUT_OF_MODEL = "out-of-model"


class CPViolationWarning(UserWarning):
    """The disordered-cavity rate is negative: the generator is not completely positive."""


@dataclass(frozen=True)
class AtomParams:
    omega0: float
    p_sq: float = 1.0

    def __post_init__(self):
        if not self.omega0 > 0:
            raise ValueError(f"omega0 must be > 0, got {self.omega0!r}")
        if not self.p_sq >= 0:
            raise ValueError(f"p_sq must be >= 0, got {self.p_sq!r}")


@dataclass(frozen=True)
class KossakowskiCoeffs:
    """Rates ``a11`` (empty cavity) and ``a22`` (disordered cavity)."""

    a11: float
    a22: float

    @property
    def total(self) -> float:
        return self.a11 + self.a22


def _rate(g_pos: float, g_neg: float, p_sq: float) -> float:
    # g_+ = (G(w0) + G(-w0)) / 4 multiplies delta - n n, g_- the Levi-Civita
    # part; G(-w0) = 0 makes them equal, so one scalar A carries the matrix.
    return (g_pos + g_neg) / 4.0 * p_sq


def coeff_empty(atom: AtomParams) -> float:
    """Rate ``omega0^3 / (12 pi) * p_sq`` of the atom in the empty cavity."""
    w = atom.omega0
    g_pos = spectral_free(1, w)
    g_neg = spectral_free(-1, w)
    return _rate(g_pos, g_neg, atom.p_sq)


def coeff_disordered(atom: AtomParams, sigma2: float, warn: bool = True) -> float:
    """Rate of the atom in the disordered cavity.

    Equals ``omega0^3/(12 pi) * (1 - sigma2 omega0^3 / (6 pi)) * p_sq``. A
    negative result is returned as is; with ``warn`` a
    :class:`CPViolationWarning` is emitted.
    """
    if sigma2 < 0:
        raise ValueError(f"sigma2 must be >= 0, got {sigma2!r}")
    w = atom.omega0
    g_pos = spectral_free(1, w) + spectral_disorder_correction(1, w, sigma2)
    g_neg = spectral_free(-1, w) + spectral_disorder_correction(-1, w, sigma2)
    rate = _rate(g_pos, g_neg, atom.p_sq)
    if rate < 0 and warn:
        warnings.warn(
            f"a22 = {rate:.6g} < 0 at sigma2 = {sigma2:g}, omega0 = {w:g}: "
            "Kossakowski matrix is not positive semidefinite",
            CPViolationWarning,
            stacklevel=2,
        )
    return rate


def kossakowski_coeffs(
    omega0: float, sigma2: float, p1_sq: float = 1.0, p2_sq: float = 1.0, warn: bool = True
) -> KossakowskiCoeffs:
    """Both rates for atoms sharing ``omega0``."""
    return KossakowskiCoeffs(
        coeff_empty(AtomParams(omega0, p1_sq)),
        coeff_disordered(AtomParams(omega0, p2_sq), sigma2, warn=warn),
    )


_LEVI_CIVITA = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    _LEVI_CIVITA[_i, _j, _k] = 1.0
    _LEVI_CIVITA[_j, _i, _k] = -1.0


def kossakowski_matrix(A: float, n=(0.0, 0.0, 1.0), tol: float = 1e-12) -> np.ndarray:
    """``K_ij = A (delta_ij - n_i n_j - i eps_ijm n_m)`` for a unit vector ``n``."""
    n = np.asarray(n, dtype=float)
    if n.shape != (3,) or abs(n @ n - 1.0) > tol:
        raise ValueError(f"n must be a unit 3-vector, got {n!r}")
    return A * (np.eye(3) - np.outer(n, n) - 1j * np.einsum("ijm,m->ij", _LEVI_CIVITA, n))


def cp_bound(omega0: float) -> float:
    """Largest disorder strength with ``a22 >= 0``, ``6 pi / omega0^3``."""
    if not omega0 > 0:
        raise ValueError(f"omega0 must be > 0, got {omega0!r}")
    return 6.0 * np.pi / omega0**3


def critical_sigma(omega0: float) -> float:
    """Disorder strength ``12 pi / omega0^3`` at which ``a11 + a22 = 0`` for equal polarizations."""
    if not omega0 > 0:
        raise ValueError(f"omega0 must be > 0, got {omega0!r}")
    return 12.0 * np.pi / omega0**3


@dataclass(frozen=True)
class ValidityReport:
    regime: str
    sigma2: float
    omega0: float
    cp_bound: float
    critical: float
    a11: float
    a22: float

    @property
    def completely_positive(self) -> bool:
        return self.regime == CP_VALID

    def describe(self) -> str:
        return (
            f"sigma2 = {self.sigma2:.17g} at omega0 = {self.omega0:.17g}: {self.regime} "
            f"(CP bound {self.cp_bound:.17g}, critical {self.critical:.17g})"
        )


def cp_validity(coeffs: KossakowskiCoeffs, omega0: float, sigma2: float) -> ValidityReport:
    """Classify a parameter point by the sign of ``a22`` and the critical strength.

    The regime boundaries are ``6 pi / omega0^3`` (``a22`` changes sign) and
    ``12 pi / omega0^3`` (singlet concurrence would exceed one beyond it).
    """
    lo, hi = cp_bound(omega0), critical_sigma(omega0)
    if sigma2 <= lo:
        regime = CP_VALID
    elif sigma2 <= hi:
        regime = PAPER_EXTENDED
    else:
        regime = OUT_OF_MODEL
    if regime != CP_VALID:
        logger.info("sigma2=%g omega0=%g classified %s (a22=%g)", sigma2, omega0, regime, coeffs.a22)
    return ValidityReport(regime, sigma2, omega0, lo, hi, coeffs.a11, coeffs.a22)
