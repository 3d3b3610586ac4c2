import numpy as np
import pytest

from pencil_tracemin.errors import (
    DegenerateInputError,
    InertiaViolationError,
    NotJUnitaryError,
)
from pencil_tracemin.hyperbolic import (
    SignatureJ,
    chsh_decompose,
    complete_j_basis,
    j_residual,
    polar_from_W,
    sample_feasible,
    sample_j_unitary,
)

from conftest import rand_hermitian


def test_polar_identity():
    X = polar_from_W(np.zeros((2, 1)), np.eye(2), np.eye(1))
    np.testing.assert_allclose(X, np.eye(3), atol=1e-14)


def test_polar_1x1_algebraic_identity():
    s = 0.8
    X = polar_from_W(np.array([[s]]), np.eye(1), np.eye(1))
    expected = np.array([[np.sqrt(1 + s * s), s], [s, np.sqrt(1 + s * s)]])
    np.testing.assert_allclose(X, expected, atol=1e-15)
    J = SignatureJ(1, 1)
    # (1 + s^2) - s^2 = 1 exactly.
    assert j_residual(X, J) <= 1e-14


def test_polar_random_residual():
    rng = np.random.default_rng(5)
    from pencil_tracemin.matcore import haar_unitary

    W = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
    X = polar_from_W(W, haar_unitary(3, rng), haar_unitary(2, rng))
    assert j_residual(X, SignatureJ(3, 2)) <= 1e-10 * 5


def test_chsh_identity():
    J = SignatureJ(2, 1)
    fac = chsh_decompose(np.eye(3), J)
    np.testing.assert_allclose(fac.sigma, [0.0], atol=1e-12)
    np.testing.assert_allclose(fac.assemble(J), np.eye(3), atol=1e-10)


def test_chsh_sigma_matches_svd_of_w():
    rng = np.random.default_rng(9)
    W = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
    X = polar_from_W(W, np.eye(3), np.eye(2))
    fac = chsh_decompose(X, SignatureJ(3, 2))
    np.testing.assert_allclose(fac.sigma, np.linalg.svd(W, compute_uv=False), atol=1e-10)


def test_chsh_rejects_non_j_unitary():
    with pytest.raises(NotJUnitaryError):
        chsh_decompose(2.0 * np.eye(3), SignatureJ(2, 1))


def test_chsh_round_trip():
    rng = np.random.default_rng(12)
    for npl, nmi in ((2, 2), (3, 2), (2, 3), (1, 4)):
        J = SignatureJ(npl, nmi)
        X = sample_j_unitary(J, 1.0, rng)
        fac = chsh_decompose(X, J, tol=1e-7)
        recon = fac.assemble(J)
        assert np.linalg.norm(recon - X, 2) <= 1e-8 * (1 + np.linalg.norm(X, 2))
        assert np.all(np.diff(fac.sigma) <= 1e-12)  # descending


def test_sample_spread_zero_is_block_unitary():
    rng = np.random.default_rng(3)
    J = SignatureJ(2, 2)
    X = sample_j_unitary(J, 0.0, rng)
    assert j_residual(X, J) <= 1e-12
    assert np.linalg.norm(X[:2, 2:], 2) <= 1e-14


def test_sample_deterministic_and_residual():
    J = SignatureJ(3, 2)
    X1 = sample_j_unitary(J, 1.0, np.random.default_rng(42))
    X2 = sample_j_unitary(J, 1.0, np.random.default_rng(42))
    np.testing.assert_array_equal(X1, X2)
    assert j_residual(X1, J) <= 1e-9


def test_group_property():
    rng = np.random.default_rng(21)
    J = SignatureJ(2, 3)
    X = sample_j_unitary(J, 1.5, rng) @ sample_j_unitary(J, 0.5, rng)
    assert j_residual(X, J) <= 1e-8


def test_sample_feasible_full_and_selected():
    rng = np.random.default_rng(7)
    J, Jh = SignatureJ(1, 1), SignatureJ(1, 0)
    X = sample_feasible(J, Jh, 1.0, rng)
    assert X.shape == (2, 1)
    form = X.conj().T @ J.matrix @ X
    np.testing.assert_allclose(form, [[1.0]], atol=1e-9)

    J, Jh = SignatureJ(1, 2), SignatureJ(1, 1)
    X = sample_feasible(J, Jh, 1.0, np.random.default_rng(7))
    G = X.conj().T @ J.matrix @ X
    np.testing.assert_allclose(G, np.diag([1.0, -1.0]), atol=1e-9)


def test_sample_feasible_inertia_violation():
    with pytest.raises(InertiaViolationError):
        sample_feasible(SignatureJ(1, 1), SignatureJ(2, 0), 1.0, np.random.default_rng(0))


def test_complete_j_basis_examples():
    J = SignatureJ(1, 1)
    full = complete_j_basis(np.eye(2)[:, :1], J)
    G = full.conj().T @ J.matrix @ full
    np.testing.assert_allclose(G, np.diag([1.0, -1.0]), atol=1e-12)

    full = complete_j_basis(np.zeros((2, 0)), J)
    np.testing.assert_allclose(full, np.eye(2))

    J = SignatureJ(2, 1)
    full = complete_j_basis(np.eye(3)[:, :1], J)
    G = full.conj().T @ J.matrix @ full
    assert np.allclose(np.abs(np.diagonal(G)), 1.0, atol=1e-12)
    assert sorted(np.round(np.real(np.diagonal(G))).astype(int)) == [-1, 1, 1]


def test_complete_j_basis_from_sampled_columns():
    rng = np.random.default_rng(4)
    J = SignatureJ(2, 2)
    X = sample_j_unitary(J, 1.0, rng)[:, :2]
    full = complete_j_basis(X, J, tol=1e-7)
    G = full.conj().T @ J.matrix @ full
    off = G - np.diag(np.diagonal(G))
    assert np.linalg.norm(off, 2) <= 1e-7
    diag = np.real(np.diagonal(G))
    assert int(np.sum(diag > 0)) == 2 and int(np.sum(diag < 0)) == 2


def test_complete_j_basis_rejects_neutral():
    J = SignatureJ(1, 1)
    neutral = np.array([[1.0], [1.0]]) / np.sqrt(2)
    with pytest.raises(DegenerateInputError):
        complete_j_basis(neutral, J)


def test_trace_sandwich_bounds():
    # For PSD A0, A1 and J-unitary X:
    # sum l_i^dn(A0) l_i^up(A1) smin(X)^2 <= tr(A0 X^H A1 X)
    #                                     <= sum l_i^dn(A0) l_i^dn(A1) smax(X)^2.
    rng = np.random.default_rng(33)
    for _ in range(40):
        npl = int(rng.integers(1, 4))
        nmi = int(rng.integers(1, 4))
        n = npl + nmi
        M0 = rand_hermitian(rng, n)
        M1 = rand_hermitian(rng, n)
        A0 = M0 @ M0.conj().T
        A1 = M1 @ M1.conj().T
        X = sample_j_unitary(SignatureJ(npl, nmi), 1.0, rng)
        tr = float(np.real(np.trace(A0 @ X.conj().T @ A1 @ X)))
        s = np.linalg.svd(X, compute_uv=False)
        l0 = np.sort(np.linalg.eigvalsh(A0))[::-1]
        l1 = np.sort(np.linalg.eigvalsh(A1))
        lower = float(l0 @ l1) * s[-1] ** 2
        upper = float(l0 @ l1[::-1]) * s[0] ** 2
        assert lower - 1e-8 * (1 + abs(lower)) <= tr <= upper + 1e-8 * (1 + abs(upper))
