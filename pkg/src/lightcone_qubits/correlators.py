"""Electric-field Wightman functions and spectral densities.

Natural units throughout (hbar = c = 1). Static-atom correlators are the
coefficient of delta_ij; the position-space disorder correlator returns a
single (a, b) tensor component. Finite ``eps`` values exist only for the
quadrature checks; the rate computations use the eps -> 0 spectral densities.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

PI = np.pi


@dataclass(frozen=True)
class DisorderParams:
    """Strength ``sigma2`` of the random susceptibility and regulator ``epsilon``."""

    sigma2: float = 0.0
    epsilon: float = 1e-3

    def __post_init__(self):
        if not self.sigma2 >= 0:
            raise ValueError(f"sigma2 must be >= 0, got {self.sigma2!r}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon!r}")


def _check_eps(eps):
    if not np.all(np.asarray(eps) > 0):
        raise ValueError(f"regulator eps must be > 0, got {eps!r}")


def _check_omega(omega0):
    if not omega0 > 0:
        raise ValueError(f"omega0 must be > 0, got {omega0!r}")


def _check_eta(eta):
    if eta not in (1, -1):
        raise ValueError(f"eta must be +1 or -1, got {eta!r}")


def wightman_free_static(dtau, eps):
    """Vacuum correlator ``1 / (pi^2 (dtau - i eps)^4)``; accepts arrays."""
    _check_eps(eps)
    z = np.asarray(dtau) - 1j * eps
    return 1.0 / (PI**2 * z**4)


def wightman_disorder_static(dtau, eps, sigma2):
    """Disorder-averaged first-order correction ``-20 i sigma2 / (pi^3 (dtau - i eps)^7)``."""
    _check_eps(eps)
    z = np.asarray(dtau) - 1j * eps
    return -20j * sigma2 / (PI**3 * z**7)


def wightman_disorder_full(dt, dx, eps, sigma2, a: int, b: int) -> complex:
    """Component (a, b) of the disorder correction at separation (dt, dx).

    ``a`` and ``b`` are spatial indices in 1..3. Every occurrence of the
    time separation carries the regulator, ``z = dt - i eps``, including the
    lone prefactor of the second bracket in each group; with that uniform
    prescription the ``dx = 0`` value equals :func:`wightman_disorder_static`
    exactly rather than only as ``eps -> 0``.
    """
    _check_eps(eps)
    if a not in (1, 2, 3) or b not in (1, 2, 3):
        raise ValueError(f"spatial indices must be in 1..3, got ({a!r}, {b!r})")
    dx = np.asarray(dx, dtype=float)
    z = dt - 1j * eps
    r2 = float(dx @ dx)
    r4, r6 = r2 * r2, r2 * r2 * r2
    z2 = z * z
    z4, z6 = z2 * z2, z2 * z2 * z2

    # Parenthesized so the product is exactly symmetric under a <-> b.
    xx = 12.0 * (dx[a - 1] * dx[b - 1]) * (
        2.0 * z * (3.0 * r4 + 4.0 * r2 * z2 - 7.0 * z4)
        + z * (r4 + 18.0 * r2 * z2 + 21.0 * z4)
    )
    delta = 1.0 if a == b else 0.0
    dd = delta * (
        6.0 * z * (9.0 * r6 + 17.0 * r4 * z2 - 21.0 * r2 * z4 - 5.0 * z6)
        + z * (9.0 * r6 + 177.0 * r4 * z2 + 259.0 * r2 * z4 + 35.0 * z6)
    )
    pref = 4j * sigma2 / (PI**3 * (z2 - r2) ** 7)
    return complex(pref * (xx - dd))


def spectral_free(eta: int, omega0: float) -> float:
    """Fourier transform of the vacuum correlator at ``eta * omega0``."""
    _check_eta(eta)
    _check_omega(omega0)
    if eta < 0:
        return 0.0
    return omega0**3 / (3.0 * PI)


def spectral_disorder_correction(eta: int, omega0: float, sigma2: float) -> float:
    """Fourier transform of the disorder correction at ``eta * omega0``."""
    _check_eta(eta)
    _check_omega(omega0)
    if sigma2 < 0:
        raise ValueError(f"sigma2 must be >= 0, got {sigma2!r}")
    if eta < 0:
        return 0.0
    return -sigma2 * omega0**6 / (18.0 * PI**2)


def self_energy(k0: float, sigma2: float) -> float:
    """Coefficient of delta_jm in the noise-averaged self-energy."""
    return sigma2 * k0**3 / (3.0 * PI)


def spectral_numeric_oracle(
    correlator: Callable,
    omega: float,
    eps: float,
    T: float,
    n: int,
) -> complex:
    """Composite trapezoid estimate of ``int_{-T}^{T} exp(i omega u) D(u, eps) du``.

    ``correlator`` is called once with the full sample grid, e.g.
    ``lambda u, eps: wightman_free_static(u, eps)``. The grid has ``n``
    intervals (``n`` even) so ``u = 0`` is a node.
    """
    _check_eps(eps)
    if n <= 0 or n % 2:
        raise ValueError(f"n must be a positive even integer, got {n!r}")
    if not T > 0:
        raise ValueError(f"T must be > 0, got {T!r}")
    u = np.linspace(-T, T, n + 1)
    f = np.exp(1j * omega * u) * correlator(u, eps)
    if not np.all(np.isfinite(f)):
        raise FloatingPointError("non-finite integrand sample; regulator too small for the grid")
    h = 2.0 * T / n
    return complex(h * (f.sum() - 0.5 * (f[0] + f[-1])))


ORACLE_EPS = 0.05


def converged_spectral(
    correlator: Callable,
    omega: float,
    eps: float = ORACLE_EPS,
    T: float = 200.0,
    n: int = 2**20,
) -> tuple[complex, float]:
    """Oracle estimate plus a two-way convergence check.

    The grid is refined once (``n`` doubled at fixed ``T``) and widened once
    (``n`` and ``T`` doubled together). Returns the widest estimate and the
    largest relative change seen.
    Changes are measured against the first estimate's magnitude, floored at
    ``1e-12`` so suppressed negative-frequency transforms still compare.

    With ``eps`` much below the default the integrand peak ``eps**-7`` of the
    disorder correlator exceeds what double precision can cancel on any
    affordable grid; the analytic comparison value carries ``exp(-eps*omega)``
    so a moderate regulator loses nothing.
    """
    base = spectral_numeric_oracle(correlator, omega, eps, T, n)
    scale = max(abs(base), 1e-12)
    finer = spectral_numeric_oracle(correlator, omega, eps, T, 2 * n)
    wider = spectral_numeric_oracle(correlator, omega, eps, 2 * T, 4 * n)
    change = max(abs(finer - base), abs(wider - finer)) / scale
    return wider, float(change)
