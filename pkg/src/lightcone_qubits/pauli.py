"""Pauli basis, two-qubit Bloch matrices and small dense eigenproblems.

A two-qubit state is stored either as a 4x4 complex density matrix in the
computational basis or as its real 4x4 Bloch matrix ``r`` with

    rho = 1/4 * sum_{mu,nu} r[mu, nu] * kron(sigma_mu, sigma_nu),  r[0, 0] = 1.

The first tensor slot belongs to atom 1, the second to atom 2.
"""

from __future__ import annotations

import mpmath
import numpy as np

from ._precision import all_finite, is_mp

HERMITIAN_TOL = 1e-9

_PAULI = (
    np.array([[1, 0], [0, 1]], dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


class InvalidStateError(ValueError):
    """Raised when a matrix is not an admissible two-qubit state."""


def pauli(i: int) -> np.ndarray:
    """Return sigma_i; ``pauli(0)`` is the 2x2 identity, ``pauli(3)`` is diag(1, -1)."""
    if i not in (0, 1, 2, 3):
        raise IndexError(f"Pauli index must be in 0..3, got {i!r}")
    return _PAULI[i].copy()


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with ``(a x b)[2i+k, 2j+l] = a[i, j] * b[k, l]``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise ValueError("kron expects two 2x2 matrices")
    return np.kron(a, b)


# SIGMA[mu, nu] = kron(sigma_mu, sigma_nu)
SIGMA = np.array([[np.kron(_PAULI[m], _PAULI[n]) for n in range(4)] for m in range(4)])


# Nonzero terms of SIGMA[:, :, i, j] as (m, n, is_imaginary, sign); every
# entry of a Pauli product is one of +-1, +-i, and each (i, j) has four.
_SIGMA_SUPPORT = [
    [
        [
            (m, n, SIGMA[m, n, i, j].imag != 0, int(np.sign(SIGMA[m, n, i, j].real + SIGMA[m, n, i, j].imag)))
            for m in range(4)
            for n in range(4)
            if SIGMA[m, n, i, j] != 0
        ]
        for j in range(4)
    ]
    for i in range(4)
]


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    m = np.asarray(m)
    return hermiticity_error(m) <= tol


def hermiticity_error(m: np.ndarray) -> float:
    """Largest entrywise modulus of ``m - m^dagger``."""
    m = np.asarray(m)
    diff = m - m.conj().T
    if is_mp(m):
        return float(max(abs(v) for v in diff.flat))
    return float(np.max(np.abs(diff)))


def bloch_to_density(r: np.ndarray, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Expand a real Bloch matrix into the 4x4 density matrix.

    Raises
    ------
    InvalidStateError
        If ``r[0, 0]`` differs from one or any entry is not finite.
    """
    r = np.asarray(r)
    if not is_mp(r):
        r = r.astype(float)
    if r.shape != (4, 4):
        raise ValueError(f"Bloch matrix must be 4x4, got shape {r.shape}")
    if not all_finite(r):
        raise InvalidStateError("Bloch matrix has non-finite entries")
    if abs(r[0, 0] - 1.0) > tol:
        raise InvalidStateError(f"Bloch matrix not normalized: r00 = {r[0, 0]!r}")
    if not is_mp(r):
        return np.einsum("mn,mnij->ij", r, SIGMA) / 4.0
    rho = np.empty((4, 4), dtype=object)
    for i in range(4):
        for j in range(4):
            re = im = mpmath.mpf(0)
            for m, n, imaginary, sign in _SIGMA_SUPPORT[i][j]:
                term = r[m, n] if sign > 0 else -r[m, n]
                if imaginary:
                    im += term
                else:
                    re += term
            rho[i, j] = mpmath.mpc(re, im) / 4
    return rho


def density_to_bloch(rho: np.ndarray, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``r[mu, nu] = Tr[rho . kron(sigma_mu, sigma_nu)]``.

    Raises
    ------
    InvalidStateError
        If any coefficient has an imaginary part above ``tol`` (non-Hermitian
        input) or the trace is not one.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"density matrix must be 4x4, got shape {rho.shape}")
    # Tr[rho S] = sum_ij rho_ij S_ji
    coeffs = np.einsum("ij,mnji->mn", rho, SIGMA)
    if np.max(np.abs(coeffs.imag)) > tol:
        raise InvalidStateError("Bloch coefficients are not real; input is not Hermitian")
    r = coeffs.real.copy()
    if abs(r[0, 0] - 1.0) > tol:
        raise InvalidStateError(f"density matrix trace is {r[0, 0]!r}, expected 1")
    return r


def generator_to_bloch(drho: np.ndarray) -> np.ndarray:
    """Bloch coefficients of a traceless operator such as d(rho)/dt.

    Unlike :func:`density_to_bloch` no normalization is imposed; the
    coefficients are returned complex so callers can inspect the imaginary
    residue.
    """
    drho = np.asarray(drho, dtype=complex)
    return np.einsum("ij,mnji->mn", drho, SIGMA)


def _components(m: np.ndarray) -> list[list[int]]:
    # Connected components of the coupling graph i ~ j iff m[i, j] or m[j, i] != 0.
    n = m.shape[0]
    nonzero = np.array([[bool(v) for v in row] for row in m]) if is_mp(m) else m != 0
    coupled = nonzero | nonzero.T
    seen = [False] * n
    comps = []
    for start in range(n):
        if seen[start]:
            continue
        stack, comp = [start], []
        seen[start] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if coupled[i, j] and not seen[j]:
                    seen[j] = True
                    stack.append(j)
        comps.append(sorted(comp))
    return comps


def _block_eigenvalues_mp(block):
    n = block.shape[0]
    if n == 2:
        # Closed form keeps the small root accurate via the product of roots.
        a, b, c, d = block[0, 0], block[0, 1], block[1, 0], block[1, 1]
        tr, det = a + d, a * d - b * c
        disc = mpmath.sqrt(tr * tr - 4 * det)
        big = (tr + disc) / 2 if abs(tr + disc) >= abs(tr - disc) else (tr - disc) / 2
        small = det / big if big != 0 else mpmath.mpc(0)
        return [big, small]
    vals = mpmath.eig(mpmath.matrix(block.tolist()), left=False, right=False)
    return list(vals)


def eigenvalues4(m: np.ndarray) -> np.ndarray:
    """Eigenvalues of a 4x4 complex matrix, unordered.

    Exact zeros in ``m`` that decouple index subsets are used to split the
    problem into independent diagonal blocks before solving. This is a
    permutation similarity, so nothing is approximated, but it keeps the
    error of each block relative to that block's own norm. X-shaped states
    and their spin-flip products benefit directly.

    Object arrays of mpmath numbers are solved at the current mpmath
    precision; the result is always rounded to complex128.
    """
    m = np.asarray(m)
    mp = is_mp(m)
    if not mp:
        m = m.astype(complex)
    if m.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
    if not all_finite(m):
        raise np.linalg.LinAlgError("matrix has non-finite entries")
    out = []
    for comp in _components(m):
        block = m[np.ix_(comp, comp)]
        if len(comp) == 1:
            out.append(block[0, 0])
        elif mp:
            out.extend(_block_eigenvalues_mp(block))
        else:
            out.extend(np.linalg.eigvals(block))
    return np.array([complex(v) for v in out], dtype=complex)


def charpoly4(m: np.ndarray) -> np.ndarray:
    """Characteristic polynomial coefficients by Faddeev-LeVerrier.

    Returns ``c`` with ``det(lambda I - m) = lambda^4 + c[1] lambda^3 + ...
    + c[4]`` and ``c[0] = 1``. Used as an independent check on
    :func:`eigenvalues4`.
    """
    m = np.asarray(m, dtype=complex)
    n = 4
    c = np.zeros(n + 1, dtype=complex)
    c[0] = 1.0
    mk = np.zeros_like(m)
    ident = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        mk = m @ (mk + c[k - 1] * ident)
        c[k] = -np.trace(mk) / k
    return c


def det4(m: np.ndarray) -> complex:
    """Determinant by cofactor expansion along the first row."""
    m = np.asarray(m, dtype=complex)

    def det3(a):
        return (
            a[0, 0] * (a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1])
            - a[0, 1] * (a[1, 0] * a[2, 2] - a[1, 2] * a[2, 0])
            + a[0, 2] * (a[1, 0] * a[2, 1] - a[1, 1] * a[2, 0])
        )

    total = 0j
    for j in range(4):
        minor = np.delete(np.delete(m, 0, axis=0), j, axis=1)
        total += (-1) ** j * m[0, j] * det3(minor)
    return complex(total)
