"""Dissipative evolution of the two-qubit Bloch matrix.

The quantization axis is fixed along z. The Hamiltonian part of the master
equation only renormalizes the local frequencies and cannot change
entanglement, so it is left out.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

import mpmath

from . import _precision
from ._precision import is_mp, to_float, to_mp
from .entanglement import concurrence, min_eigenvalue
from .kossakowski import KossakowskiCoeffs
from .pauli import _PAULI, bloch_to_density, hermiticity_error

# Column order used by trajectories and CSV output.
BLOCH_INDICES = (
    (0, 1), (0, 2), (0, 3),
    (1, 0), (2, 0), (3, 0),
    (1, 1), (1, 2), (1, 3),
    (2, 1), (2, 2), (2, 3),
    (3, 1), (3, 2), (3, 3),
)  # fmt: skip
BLOCH_LABELS = tuple(f"r{m}{n}" for m, n in BLOCH_INDICES)

_I2 = _PAULI[0]
SIGMA_ATOM1 = tuple(np.kron(_PAULI[i], _I2) for i in (1, 2, 3))
SIGMA_ATOM2 = tuple(np.kron(_I2, _PAULI[i]) for i in (1, 2, 3))


@dataclass
class BlochState:
    r: np.ndarray
    tau: float = 0.0

    def __post_init__(self):
        self.r = np.asarray(self.r)
        if not is_mp(self.r):
            self.r = self.r.astype(float)
        if self.r.shape != (4, 4):
            raise ValueError(f"Bloch matrix must be 4x4, got shape {self.r.shape}")
        if self.tau < 0:
            raise ValueError(f"tau must be >= 0, got {self.tau!r}")

    def density(self) -> np.ndarray:
        return bloch_to_density(self.r)

    def flat(self) -> np.ndarray:
        """The 15 free components in ``BLOCH_LABELS`` order."""
        return np.array([self.r[m, n] for m, n in BLOCH_INDICES])

    def to_mp(self) -> BlochState:
        """Copy with mpmath entries at the current working precision."""
        return BlochState(to_mp(self.r), self.tau)


@dataclass
class Trajectory:
    """Samples of one integration run, one row per recorded step."""

    tau: np.ndarray
    bloch: np.ndarray  # (n, 4, 4)
    concurrence: np.ndarray
    trace_err: np.ndarray
    herm_err: np.ndarray
    min_eig: np.ndarray
    clamped: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=bool))

    def __len__(self):
        return len(self.tau)

    def final(self) -> BlochState:
        return BlochState(self.bloch[-1].copy(), float(self.tau[-1]))

    def rows(self):
        """Yield ``(tau, 15 Bloch components, concurrence, trace_err, herm_err, min_eig)``."""
        for k in range(len(self.tau)):
            r = self.bloch[k]
            yield (
                self.tau[k],
                *(r[m, n] for m, n in BLOCH_INDICES),
                self.concurrence[k],
                self.trace_err[k],
                self.herm_err[k],
                self.min_eig[k],
            )


def werner_state(kappa: float) -> BlochState:
    """``kappa * singlet + (1 - kappa)/4 * identity`` as a Bloch state.

    ``kappa`` must lie in [-1/3, 1] for the matrix to be positive.
    """
    if not -1.0 / 3.0 - 1e-15 <= kappa <= 1.0:
        raise ValueError(f"Werner parameter must be in [-1/3, 1], got {kappa!r}")
    r = np.zeros((4, 4))
    r[0, 0] = 1.0
    for i in (1, 2, 3):
        r[i, i] = -kappa
    return BlochState(r, 0.0)


def ground_state() -> BlochState:
    """Both atoms in the lower level: the stationary state of the dissipator."""
    r = np.zeros((4, 4))
    r[0, 0] = 1.0
    r[0, 3] = r[3, 0] = -1.0
    r[3, 3] = 1.0
    return BlochState(r, 0.0)


def bloch_rhs(r: np.ndarray, c: KossakowskiCoeffs) -> np.ndarray:
    """Time derivative of the Bloch matrix; entry [0, 0] is always zero."""
    a1, a2 = c.a11, c.a22
    d = np.zeros_like(r)
    for k in (1, 2):
        d[0, k] = -2.0 * a2 * r[0, k]
        d[k, 0] = -2.0 * a1 * r[k, 0]
    d[0, 3] = -4.0 * a2 * (r[0, 3] + 1.0)
    d[3, 0] = -4.0 * a1 * (r[3, 0] + 1.0)
    for i in (1, 2):
        for j in (1, 2):
            d[i, j] = -2.0 * (a1 + a2) * r[i, j]
        d[i, 3] = -2.0 * (a1 + 2.0 * a2) * r[i, 3] - 4.0 * a2 * r[i, 0]
        d[3, i] = -2.0 * (2.0 * a1 + a2) * r[3, i] - 4.0 * a1 * r[0, i]
    d[3, 3] = -4.0 * (a1 + a2) * r[3, 3] - 4.0 * a1 * r[0, 3] - 4.0 * a2 * r[3, 0]
    return d


def closed_form(state0: BlochState, c: KossakowskiCoeffs, tau: float) -> BlochState:
    """Exact solution of :func:`bloch_rhs` at time ``tau`` after ``state0``."""
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau!r}")
    a1, a2 = c.a11, c.a22
    r0 = state0.r
    mp = is_mp(r0) or is_mp(a1) or is_mp(a2)
    if mp:
        r0 = to_mp(r0)
        a1, a2, tau = mpmath.mpf(a1), mpmath.mpf(a2), mpmath.mpf(tau)
    e = _precision.exp
    # Each distinct exponential once; the assembly below is the solution term by term.
    d2, d1, d12 = e(-2 * a2 * tau), e(-2 * a1 * tau), e(-2 * (a1 + a2) * tau)
    g1, g2, g12 = e(4 * a1 * tau), e(4 * a2 * tau), e(4 * (a1 + a2) * tau)
    m1, m2, m12 = e(-4 * a1 * tau), e(-4 * a2 * tau), e(-4 * (a1 + a2) * tau)
    d_122, d_112 = e(-2 * tau * (a1 + 2 * a2)), e(-2 * tau * (2 * a1 + a2))
    r = np.zeros_like(r0)
    r[0, 0] = 1
    for i in (1, 2):
        r[0, i] = r0[0, i] * d2
        r[i, 0] = r0[i, 0] * d1
        for j in (1, 2):
            r[i, j] = r0[i, j] * d12
        r[i, 3] = (r0[i, 3] + r0[i, 0] * (1 - g2)) * d_122
        r[3, i] = (r0[3, i] + r0[0, i] * (1 - g1)) * d_112
    r[0, 3] = -1 + (r0[0, 3] + 1) * m2
    r[3, 0] = -1 + (r0[3, 0] + 1) * m1
    r[3, 3] = m12 * (
        1 + r0[0, 3] + r0[3, 0] + r0[3, 3]
        + g12
        - (r0[0, 3] + 1) * g1
        - (r0[3, 0] + 1) * g2
    )  # fmt: skip
    return BlochState(r, state0.tau + tau)


def rk4_step(r: np.ndarray, c: KossakowskiCoeffs, dt: float) -> np.ndarray:
    k1 = bloch_rhs(r, c)
    k2 = bloch_rhs(r + 0.5 * dt * k1, c)
    k3 = bloch_rhs(r + 0.5 * dt * k2, c)
    k4 = bloch_rhs(r + dt * k3, c)
    return r + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def rk4_affine_map(c: KossakowskiCoeffs, dt) -> tuple[list, list]:
    """One :func:`rk4_step` as an affine map on the 15 free Bloch components.

    ``bloch_rhs`` is affine in the state, so the step is ``x -> L x + b`` with
    ``b`` the image of the zero state (``r00 = 1`` only) and column ``k`` of
    ``L`` the image of unit vector ``k`` minus ``b``. Returns ``L`` as sparse
    rows ``[(col, coef), ...]`` (exact zeros dropped) and ``b`` as a list.
    Works for float and mpmath inputs alike.
    """

    def unit(k):
        r = np.zeros((4, 4), dtype=object) if is_mp(dt) else np.zeros((4, 4))
        r[...] = 0
        r[0, 0] = 1
        if k is not None:
            r[BLOCH_INDICES[k]] = 1
        return r

    base = rk4_step(unit(None), c, dt)
    b = [base[idx] for idx in BLOCH_INDICES]
    rows = [[] for _ in BLOCH_INDICES]
    for k in range(len(BLOCH_INDICES)):
        image = rk4_step(unit(k), c, dt)
        for row, idx in enumerate(BLOCH_INDICES):
            coef = image[idx] - b[row]
            if coef != 0:
                rows[row].append((k, coef))
    return rows, b


def state_diagnostics(r: np.ndarray) -> tuple[float, float, float, float, bool]:
    """Concurrence, trace error, hermiticity error, minimum eigenvalue and clamp flag."""
    rho = bloch_to_density(r)
    conc = concurrence(rho, strict=False)
    # The physicality checks sit far above double rounding, so the rounded
    # matrix is good enough for them even on the mpmath path.
    rho = to_float(rho, complex_=True)
    trace_err = float(abs(np.trace(rho) - 1))
    return conc.value, trace_err, hermiticity_error(rho), min_eigenvalue(rho), conc.clamped


def _n_steps(tau_max: float, dt: float) -> int:
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt!r}")
    if tau_max < dt:
        raise ValueError(f"tau_max ({tau_max!r}) must be >= dt ({dt!r})")
    return int(round(tau_max / dt))


def integrate_rk4(
    state0: BlochState,
    c: KossakowskiCoeffs,
    tau_max: float,
    dt: float = 1e-3,
    stride: int = 1,
    diagnostics: bool = True,
    dps: int | None = None,
) -> Trajectory:
    """Fixed-step classical RK4 integration of :func:`bloch_rhs`.

    Every ``stride``-th step is recorded, plus the initial state and the final
    step. Sample times are ``k * dt`` (not accumulated sums), and the last one
    lies within ``dt / 2`` of ``tau_max``. With ``diagnostics=False`` the
    per-sample concurrence and physicality columns are left as NaN.

    With ``dps`` set, the state, rates and step are carried as mpmath numbers
    with that many digits, and the diagnostics are evaluated before rounding.
    Recorded Bloch matrices are always float64. Extended precision matters
    when populations grow (negative ``a22``) and the small ones survive only
    as differences of large Bloch components.

    Raises
    ------
    FloatingPointError
        If the state becomes non-finite.
    """
    if stride < 1:
        raise ValueError(f"stride must be >= 1, got {stride!r}")
    n = _n_steps(tau_max, dt)
    keep = sorted(set(range(0, n + 1, stride)) | {n})
    m = len(keep)
    taus = np.array([state0.tau + k * dt for k in keep])
    states = np.empty((m, 4, 4))
    cols = np.full((4, m), np.nan)
    clamped = np.zeros(m, dtype=bool)

    with mpmath.workdps(dps or mpmath.mp.dps):
        if dps:
            r = to_mp(state0.r)
            step_c = KossakowskiCoeffs(mpmath.mpf(c.a11), mpmath.mpf(c.a22))
            h = mpmath.mpf(dt)
        else:
            r = np.array(state0.r, dtype=float)
            step_c, h = c, dt
        rows, b = rk4_affine_map(step_c, h)
        x = [r[idx] for idx in BLOCH_INDICES]
        slot = 0
        for k in range(n + 1):
            if k > 0:
                x = [sum((coef * x[col] for col, coef in row), b[i]) for i, row in enumerate(rows)]
                if not _precision.all_finite(np.array(x, dtype=object)):
                    raise FloatingPointError(f"non-finite Bloch state at step {k}")
            if slot < m and keep[slot] == k:
                for i, idx in enumerate(BLOCH_INDICES):
                    r[idx] = x[i]
                states[slot] = to_float(r)
                if diagnostics:
                    cval, terr, herr, meig, clamped[slot] = state_diagnostics(r)
                    cols[:, slot] = (cval, terr, herr, meig)
                slot += 1
    return Trajectory(taus, states, cols[0], cols[1], cols[2], cols[3], clamped)


def lindblad_generator(rho: np.ndarray, K1: np.ndarray, K2: np.ndarray) -> np.ndarray:
    """Dissipator acting on a 4x4 density matrix.

    ``sum_a 1/2 sum_ij K^a_ij (2 s_j rho s_i - {s_i s_j, rho})`` where
    ``s`` runs over the Pauli operators of atom ``a`` (atom 1 in the first
    tensor slot). Cross-atom blocks of the Kossakowski matrix are zero.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"density matrix must be 4x4, got shape {rho.shape}")
    out = np.zeros((4, 4), dtype=complex)
    for K, s in ((K1, SIGMA_ATOM1), (K2, SIGMA_ATOM2)):
        K = np.asarray(K, dtype=complex)
        for i in range(3):
            for j in range(3):
                if K[i, j] == 0:
                    continue
                sij = s[i] @ s[j]
                out += 0.5 * K[i, j] * (2.0 * s[j] @ rho @ s[i] - sij @ rho - rho @ sij)
    return out
