"""Wootters concurrence and the singlet closed form."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ._precision import is_mp
from .kossakowski import KossakowskiCoeffs
from .pauli import SIGMA, InvalidStateError, eigenvalues4, hermiticity_error

logger = logging.getLogger(__name__)

CLIP_TOL = 1e-9
ERROR_TOL = 1e-7

_YY = SIGMA[2, 2]
# sigma_y x sigma_y is the anti-diagonal with signs (-1, 1, 1, -1).
_FLIP_SIGN = np.array([-1, 1, 1, -1])
_FLIP_SIGN2 = np.outer(_FLIP_SIGN, _FLIP_SIGN)


class UnphysicalStateError(InvalidStateError):
    """The eigenvalues of rho * spin_flip(rho) are not real and nonnegative."""


@dataclass(frozen=True)
class ConcurrenceResult:
    """Concurrence plus the square-rooted eigenvalues it was built from.

    Attributes
    ----------
    value : float
        Concurrence in [0, 1].
    lambdas : ndarray
        The four lambdas in decreasing order. For physical input they are
        real and nonnegative; the lenient path may return complex values.
    clamped : bool
        Some eigenvalue or the final value needed clipping beyond rounding
        level (``CLIP_TOL``).
    physical : bool
        False when the lenient path accepted eigenvalues outside ``ERROR_TOL``.
    """

    value: float
    lambdas: np.ndarray
    clamped: bool = False
    physical: bool = True

    def __float__(self):
        return self.value


def spin_flip(rho: np.ndarray) -> np.ndarray:
    """``(sigma_y x sigma_y) rho^T (sigma_y x sigma_y)``."""
    rho = np.asarray(rho)
    if not is_mp(rho):
        rho = rho.astype(complex)
    # (YY rho^T YY)_ij = s_i s_j rho_{3-j, 3-i}
    flipped = rho[::-1, ::-1].T
    if is_mp(rho):
        out = np.empty((4, 4), dtype=object)
        for i in range(4):
            for j in range(4):
                out[i, j] = flipped[i, j] if _FLIP_SIGN2[i, j] > 0 else -flipped[i, j]
        return out
    return _FLIP_SIGN2 * flipped


def min_eigenvalue(rho: np.ndarray) -> float:
    """Smallest eigenvalue of the Hermitian part of ``rho``."""
    rho = np.asarray(rho)
    herm = (rho + rho.conj().T) / 2
    if is_mp(rho):
        return float(eigenvalues4(herm).real.min())
    return float(np.linalg.eigvalsh(herm)[0])


def concurrence(rho: np.ndarray, strict: bool = True) -> ConcurrenceResult:
    """Wootters concurrence of a two-qubit density matrix.

    The lambdas are square roots of the eigenvalues of ``rho @ spin_flip(rho)``
    in decreasing order, and the concurrence is
    ``max(l1 - l2 - l3 - l4, 0)``. Eigenvalues within ``CLIP_TOL`` of the
    nonnegative real axis are projected onto it silently; up to ``ERROR_TOL``
    they are projected and ``clamped`` is set.

    With ``strict=False`` larger violations are tolerated: the square roots
    are taken on the principal branch, ordered by real part, and the real part
    of ``l1 - l2 - l3 - l4`` is clipped to [0, 1]. This reduces to the usual
    definition on physical states and gives a defined number for the
    non-positive matrices produced by a non-CP generator.

    ``rho`` may be an object array of mpmath numbers; the product matrix and
    its eigenvalues are then formed at the current mpmath precision. Near
    rank-deficient states the concurrence moves like the square root of a
    perturbation, so double-precision rounding in ``rho`` of order 1e-16
    shows up as ~1e-8 in the result; the mpmath path avoids that.

    Raises
    ------
    UnphysicalStateError
        In strict mode, if rho has an eigenvalue below ``-ERROR_TOL``, any
        product eigenvalue falls outside ``ERROR_TOL`` of the nonnegative real
        axis, or the concurrence exceeds ``1 + CLIP_TOL``.
    """
    rho = np.asarray(rho)
    if not is_mp(rho):
        rho = rho.astype(complex)
    if hermiticity_error(rho) > ERROR_TOL:
        raise InvalidStateError("density matrix is not Hermitian")
    if strict:
        min_eig = min_eigenvalue(rho)
        if min_eig < -ERROR_TOL:
            raise UnphysicalStateError(f"density matrix has eigenvalue {min_eig:.3g} < 0")

    mu = eigenvalues4(rho @ spin_flip(rho))
    deviation = np.maximum(np.abs(mu.imag), np.maximum(-mu.real, 0.0))
    worst = float(deviation.max())

    if worst <= ERROR_TOL:
        clamped = worst > CLIP_TOL
        lam = np.sort(np.sqrt(np.clip(mu.real, 0.0, None)))[::-1]
        value = lam[0] - lam[1] - lam[2] - lam[3]
        physical = True
    elif strict:
        raise UnphysicalStateError(
            f"eigenvalues of rho * spin_flip(rho) leave the nonnegative axis by {worst:.3g}"
        )
    else:
        clamped = True
        physical = False
        lam = np.sqrt(mu.astype(complex))
        lam = lam[np.argsort(-lam.real, kind="stable")]
        value = (lam[0] - lam[1] - lam[2] - lam[3]).real
        logger.debug("non-physical lambdas %s", lam)

    if value > 1.0:
        if value > 1.0 + CLIP_TOL:
            if strict:
                raise UnphysicalStateError(f"concurrence {value:.12g} exceeds one")
            logger.warning("concurrence %.12g clamped to 1", value)
        clamped = True
        value = 1.0
    value = max(float(value), 0.0)
    return ConcurrenceResult(value, lam, clamped=clamped, physical=physical)


def concurrence_singlet_closed_form(tau: float, coeffs: KossakowskiCoeffs) -> float:
    """``exp(-2 tau (a11 + a22))`` for an initial singlet.

    Raises ``ValueError`` when ``a11 + a22 < 0``, where the expression exceeds
    one for every ``tau > 0``.
    """
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau!r}")
    total = coeffs.a11 + coeffs.a22
    if total < 0:
        raise ValueError(
            f"a11 + a22 = {total:.6g} < 0: singlet concurrence would exceed one "
            "(disorder beyond the critical strength)"
        )
    return float(np.exp(-2.0 * tau * total))


def x_state_concurrence(rho: np.ndarray) -> float:
    """Closed-form concurrence of an X-shaped state (oracle for :func:`concurrence`).

    ``2 max(0, |rho_14| - sqrt(rho_22 rho_33), |rho_23| - sqrt(rho_11 rho_44))``
    in 1-based computational-basis indices.
    """
    rho = np.asarray(rho, dtype=complex)
    p = rho.diagonal().real
    a = abs(rho[0, 3]) - np.sqrt(max(p[1] * p[2], 0.0))
    b = abs(rho[1, 2]) - np.sqrt(max(p[0] * p[3], 0.0))
    return float(2.0 * max(0.0, a, b))


def is_x_state(rho: np.ndarray, tol: float = 1e-12) -> bool:
    rho = np.asarray(rho)
    mask = np.ones((4, 4), dtype=bool)
    idx = np.arange(4)
    mask[idx, idx] = False
    mask[idx, 3 - idx] = False
    return bool(np.max(np.abs(rho[mask])) <= tol)
