import numpy as np
import pytest

from lightcone_qubits.correlators import (
    DisorderParams,
    converged_spectral,
    self_energy,
    spectral_disorder_correction,
    spectral_free,
    spectral_numeric_oracle,
    wightman_disorder_full,
    wightman_disorder_static,
    wightman_free_static,
)

PI = np.pi


def expanded_full(dt, dx, eps, sigma2, a, b):
    # Independent evaluation: both brackets multiplied out by hand.
    z = dt - 1j * eps
    dx = np.asarray(dx, dtype=float)
    r2 = float(dx @ dx)
    xx = 12 * dx[a - 1] * dx[b - 1] * (7 * z * r2**2 + 26 * r2 * z**3 + 7 * z**5)
    dd = (a == b) * (63 * z * r2**3 + 279 * r2**2 * z**3 + 133 * r2 * z**5 + 5 * z**7)
    return 4j * sigma2 / (PI**3 * (z * z - r2) ** 7) * (xx - dd)


def test_disorder_params_validation():
    assert DisorderParams().sigma2 == 0
    with pytest.raises(ValueError):
        DisorderParams(sigma2=-1)
    with pytest.raises(ValueError):
        DisorderParams(epsilon=0)


def test_free_static_values():
    assert wightman_free_static(1.0, 1e-12).real == pytest.approx(1 / PI**2, rel=1e-9)
    assert wightman_free_static(0.0, 1.0) == pytest.approx(1 / PI**2)
    assert 1 / PI**2 == pytest.approx(0.101321, abs=1e-6)


@pytest.mark.parametrize("eps", [0.0, -1.0])
def test_eps_must_be_positive(eps):
    with pytest.raises(ValueError):
        wightman_free_static(1.0, eps)
    with pytest.raises(ValueError):
        wightman_disorder_static(1.0, eps, 1.0)
    with pytest.raises(ValueError):
        wightman_disorder_full(1.0, np.zeros(3), eps, 1.0, 1, 1)


def test_disorder_static_values():
    assert np.all(wightman_disorder_static(np.linspace(0.1, 3, 7), 1e-3, 0.0) == 0)
    assert wightman_disorder_static(1.0, 1e-12, 1.0) == pytest.approx(-20j / PI**3, rel=1e-9)


def test_disorder_static_scaling():
    for lam in (0.5, 2.0, 7.0):
        lhs = wightman_disorder_static(lam * 1.3, lam * 0.01, 0.2)
        rhs = lam**-7 * wightman_disorder_static(1.3, 0.01, 0.2)
        assert abs(lhs - rhs) <= 1e-12 * abs(rhs)


@pytest.mark.parametrize("eps", [1e-3, 1e-4])
@pytest.mark.parametrize("dt", [0.5, 1.0, 2.0, 5.0])
def test_coincidence_limit(dt, eps):
    ref = wightman_disorder_static(dt, eps, 0.3)
    for a in (1, 2, 3):
        assert abs(wightman_disorder_full(dt, np.zeros(3), eps, 0.3, a, a) - ref) <= 1e-9 * abs(ref)


def test_off_diagonal_vanishes_at_coincidence():
    assert wightman_disorder_full(1.0, np.zeros(3), 1e-3, 1.0, 1, 2) == 0


def test_full_matches_expanded_polynomial():
    dx = (1.0, 0.0, 0.0)
    val = wightman_disorder_full(2.0, dx, 1e-4, 1.0, 2, 2)
    ref = expanded_full(2.0, dx, 1e-4, 1.0, 2, 2)
    assert abs(val - ref) <= 1e-12 * abs(ref)
    rng = np.random.default_rng(0)
    for _ in range(30):
        dx = rng.normal(size=3)
        dt = rng.uniform(2.0, 5.0)
        a, b = rng.integers(1, 4, size=2)
        v, r = wightman_disorder_full(dt, dx, 1e-3, 0.7, a, b), expanded_full(dt, dx, 1e-3, 0.7, a, b)
        assert abs(v - r) <= 1e-10 * max(abs(r), 1e-300)


def test_full_symmetric_in_indices():
    rng = np.random.default_rng(1)
    for _ in range(20):
        dx = rng.normal(size=3)
        for a in (1, 2, 3):
            for b in (1, 2, 3):
                assert wightman_disorder_full(3.0, dx, 1e-3, 1.0, a, b) == wightman_disorder_full(3.0, dx, 1e-3, 1.0, b, a)


def test_full_index_validation():
    with pytest.raises(ValueError):
        wightman_disorder_full(1.0, np.zeros(3), 1e-3, 1.0, 0, 1)


def test_spectral_free_values():
    assert spectral_free(1, 1.0) == pytest.approx(1 / (3 * PI))
    assert spectral_free(1, 1.0) == pytest.approx(0.106103, abs=1e-6)
    assert spectral_free(1, 2.0) == pytest.approx(8 / (3 * PI))
    for w in (0.1, 1.0, 5.0):
        assert spectral_free(-1, w) == 0
    with pytest.raises(ValueError):
        spectral_free(1, 0.0)
    with pytest.raises(ValueError):
        spectral_free(0, 1.0)


def test_spectral_disorder_values():
    assert spectral_disorder_correction(1, 1.0, 1.0) == pytest.approx(-1 / (18 * PI**2))
    assert spectral_disorder_correction(1, 1.0, 1.0) == pytest.approx(-0.005629, abs=1e-6)
    assert spectral_disorder_correction(-1, 3.0, 0.5) == 0
    assert spectral_disorder_correction(1, 3.0, 0.0) == 0
    with pytest.raises(ValueError):
        spectral_disorder_correction(1, -1.0, 0.1)


def test_self_energy_values():
    assert self_energy(0.0, 1.0) == 0
    assert self_energy(1.0, 1.0) == pytest.approx(1 / (3 * PI))
    assert self_energy(-1.0, 1.0) == pytest.approx(-1 / (3 * PI))


@pytest.mark.parametrize("omega", [0.5, 1.0, 2.0])
def test_oracle_free(omega):
    est, change = converged_spectral(lambda u, e: wightman_free_static(u, e), omega)
    ref = spectral_free(1, omega) * np.exp(-0.05 * omega)
    assert change < 1e-4
    assert abs(est - ref) <= 1e-3 * ref


@pytest.mark.parametrize("omega", [0.5, 1.0, 2.0])
def test_oracle_disorder(omega):
    est, change = converged_spectral(lambda u, e: wightman_disorder_static(u, e, 1.0), omega)
    ref = spectral_disorder_correction(1, omega, 1.0) * np.exp(-0.05 * omega)
    assert change < 1e-4
    assert abs(est - ref) <= 1e-3 * abs(ref)


def test_oracle_negative_frequency_suppressed():
    for corr in (lambda u, e: wightman_free_static(u, e), lambda u, e: wightman_disorder_static(u, e, 1.0)):
        est, _ = converged_spectral(corr, -1.0)
        assert abs(est) <= 1e-4


@pytest.mark.xfail(strict=True, reason="grid step 3.8e-4 cannot resolve a peak of width 1e-3; see decisions ledger")
def test_oracle_free_small_regulator():
    # Documented example parameters: eps = 1e-3, T = 200, n = 2**20.
    est = spectral_numeric_oracle(lambda u, e: wightman_free_static(u, e), 1.0, 1e-3, 200.0, 2**20)
    assert abs(est - np.exp(-1e-3) / (3 * PI)) <= 1e-3


def test_oracle_argument_validation():
    f = lambda u, e: wightman_free_static(u, e)  # noqa: E731
    with pytest.raises(ValueError):
        spectral_numeric_oracle(f, 1.0, 0.05, 10.0, 3)
    with pytest.raises(ValueError):
        spectral_numeric_oracle(f, 1.0, 0.05, -1.0, 10)
    with pytest.raises(FloatingPointError), np.errstate(invalid="ignore"):
        spectral_numeric_oracle(lambda u, e: np.where(u == 0, np.inf, 0.0), 1.0, 0.05, 1.0, 10)
