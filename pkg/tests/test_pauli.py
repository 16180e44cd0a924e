import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from lightcone_qubits.pauli import (
    SIGMA,
    InvalidStateError,
    bloch_to_density,
    charpoly4,
    density_to_bloch,
    det4,
    eigenvalues4,
    generator_to_bloch,
    hermiticity_error,
    is_hermitian,
    kron,
    pauli,
)
from lightcone_qubits._precision import to_mp

SINGLET = np.array([[0, 0, 0, 0], [0, 0.5, -0.5, 0], [0, -0.5, 0.5, 0], [0, 0, 0, 0]], dtype=complex)


def random_density(rng):
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


# pauli / kron


def test_pauli_identity_and_sigma3():
    assert np.array_equal(pauli(0), np.eye(2))
    assert np.array_equal(pauli(3), np.diag([1, -1]))


def test_pauli_product_rule():
    assert np.allclose(pauli(1) @ pauli(2), 1j * pauli(3), atol=0)
    eps = {(1, 2, 3): 1, (2, 3, 1): 1, (3, 1, 2): 1, (2, 1, 3): -1, (3, 2, 1): -1, (1, 3, 2): -1}
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            expected = (i == j) * np.eye(2, dtype=complex)
            for k in (1, 2, 3):
                expected = expected + 1j * eps.get((i, j, k), 0) * pauli(k)
            assert np.array_equal(pauli(i) @ pauli(j), expected)


@pytest.mark.parametrize("bad", [-1, 4, 1.5])
def test_pauli_out_of_range(bad):
    with pytest.raises(IndexError):
        pauli(bad)


def test_pauli_returns_copy():
    p = pauli(1)
    p[0, 0] = 7
    assert pauli(1)[0, 0] == 0


def test_kron_examples():
    assert np.array_equal(kron(pauli(0), pauli(0)), np.eye(4))
    assert np.array_equal(kron(pauli(3), pauli(0)), np.diag([1, 1, -1, -1]))
    assert np.array_equal(kron(pauli(1), pauli(1)), np.fliplr(np.eye(4)))


def test_kron_index_convention():
    rng = np.random.default_rng(3)
    a, b = rng.normal(size=(2, 2)), rng.normal(size=(2, 2))
    k = kron(a, b)
    for i in range(2):
        for j in range(2):
            for p in range(2):
                for q in range(2):
                    assert k[2 * i + p, 2 * j + q] == a[i, j] * b[p, q]


def test_kron_shape_error():
    with pytest.raises(ValueError):
        kron(np.eye(3), np.eye(2))


# Bloch <-> density


def test_maximally_mixed():
    r = np.zeros((4, 4))
    r[0, 0] = 1
    assert np.allclose(bloch_to_density(r), np.eye(4) / 4, atol=1e-15)
    back = density_to_bloch(np.eye(4) / 4)
    assert np.allclose(back, r, atol=1e-15)


def test_singlet_projector():
    r = np.diag([1.0, -1.0, -1.0, -1.0])
    assert np.allclose(bloch_to_density(r), SINGLET, atol=1e-15)
    assert np.allclose(density_to_bloch(SINGLET), r, atol=1e-15)


def test_round_trip_random_states():
    rng = np.random.default_rng(0)
    for _ in range(50):
        rho = random_density(rng)
        assert np.max(np.abs(bloch_to_density(density_to_bloch(rho)) - rho)) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, (4, 4), elements=st.floats(-1, 1)))
def test_bloch_to_density_hermitian_unit_trace(r):
    r = r.copy()
    r[0, 0] = 1.0
    rho = bloch_to_density(r)
    assert hermiticity_error(rho) <= 1e-15
    assert abs(np.trace(rho) - 1) <= 1e-14
    assert np.allclose(density_to_bloch(rho), r, atol=1e-14)


def test_bloch_to_density_rejects_unnormalized_and_nonfinite():
    r = np.eye(4)
    r[0, 0] = 2.0
    with pytest.raises(InvalidStateError):
        bloch_to_density(r)
    r = np.zeros((4, 4))
    r[0, 0] = 1
    r[1, 2] = np.nan
    with pytest.raises(InvalidStateError):
        bloch_to_density(r)
    with pytest.raises(ValueError):
        bloch_to_density(np.eye(3))


def test_density_to_bloch_rejects_non_hermitian_and_bad_trace():
    rho = np.eye(4, dtype=complex) / 4
    rho[0, 1] = 0.1
    with pytest.raises(InvalidStateError):
        density_to_bloch(rho)
    with pytest.raises(InvalidStateError):
        density_to_bloch(np.eye(4) / 2)


def test_mp_bloch_to_density_matches_float():
    rng = np.random.default_rng(1)
    r = density_to_bloch(random_density(rng))
    with mpmath.workdps(30):
        rho_mp = bloch_to_density(to_mp(r))
    rho = bloch_to_density(r)
    assert np.max(np.abs(rho_mp.astype(complex) - rho)) <= 1e-15


def test_generator_to_bloch_linear_and_unnormalized():
    s = SIGMA[1, 3]
    coeffs = generator_to_bloch(s)
    expected = np.zeros((4, 4))
    expected[1, 3] = 4.0
    assert np.allclose(coeffs, expected)


def test_is_hermitian_threshold():
    m = np.eye(4, dtype=complex)
    m[0, 1] = 1e-10
    assert is_hermitian(m, tol=1e-9)
    m[0, 1] = 1e-8
    assert not is_hermitian(m, tol=1e-9)
    assert hermiticity_error(m) == pytest.approx(1e-8)


# eigenvalues


def test_eigenvalues_examples():
    assert np.allclose(np.sort(eigenvalues4(np.diag([1, 2, 3, 4])).real), [1, 2, 3, 4])
    assert np.allclose(eigenvalues4(np.eye(4)), 1)


def test_eigenvalues_hermitian_invariants():
    rng = np.random.default_rng(2)
    for _ in range(50):
        g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        m = g + g.conj().T
        lam = eigenvalues4(m)
        assert np.all(np.abs(lam.imag) <= 1e-9 * (1 + np.abs(lam)))
        assert abs(lam.sum() - np.trace(m)) <= 1e-10 * max(1, abs(np.trace(m)))
        d = det4(m)
        assert abs(np.prod(lam) - d) <= 1e-9 * max(1, abs(d))


def test_eigenvalues_match_charpoly_roots():
    rng = np.random.default_rng(4)
    for _ in range(20):
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        c = charpoly4(m)
        lam = eigenvalues4(m)
        for v in lam:
            assert abs(np.polyval(c, v)) <= 1e-9 * max(1, np.abs(c).max() * max(1, abs(v)) ** 4)


def test_charpoly_and_det_against_numpy():
    rng = np.random.default_rng(5)
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    assert np.allclose(charpoly4(m), np.poly(m), atol=1e-10)
    assert abs(det4(m) - np.linalg.det(m)) <= 1e-10 * abs(np.linalg.det(m))


def test_eigenvalues_block_split_keeps_small_block_accurate():
    # Two decoupled blocks with very different scales.
    m = np.zeros((4, 4), dtype=complex)
    m[np.ix_((0, 3), (0, 3))] = [[1e8, 1.0], [1.0, 2e8]]
    m[np.ix_((1, 2), (1, 2))] = [[2e-12, 1e-12], [1e-12, 2e-12]]
    lam = np.sort(eigenvalues4(m).real)
    assert lam[0] == pytest.approx(1e-12, rel=1e-9)
    assert lam[1] == pytest.approx(3e-12, rel=1e-9)


def test_eigenvalues_mp_path():
    rng = np.random.default_rng(6)
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    m = g + g.conj().T
    with mpmath.workdps(30):
        lam_mp = np.sort(eigenvalues4(to_mp(m)).real)
    assert np.allclose(lam_mp, np.sort(np.linalg.eigvalsh(m)), atol=1e-12)


def test_eigenvalues_rejects_nonfinite():
    m = np.eye(4)
    m[0, 0] = np.inf
    with pytest.raises(np.linalg.LinAlgError):
        eigenvalues4(m)
