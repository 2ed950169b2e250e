import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circbeta.linalg import (
    DegenerateSpectrumError,
    RealSchurParameters,
    SchurParameters,
    SingularShiftError,
    TridiagonalMatrix,
    build_hessenberg,
    build_real_orthogonal,
    dual_product,
    eigen_real_orthogonal,
    eigen_symmetric_tridiag,
    eigen_unit,
    eigen_unit_paired,
    is_unitary,
    rank1_row_scale,
    realify_double,
    resolvent_11,
)
from circbeta.polynomials import szego_run, unit_circle_angles
from circbeta.ensembles import sample_haar


def random_schur(n, rng, radius=0.85):
    interior = np.sqrt(rng.uniform(0, radius**2, n - 1)) * np.exp(
        1j * rng.uniform(0, 2 * np.pi, n - 1)
    )
    return SchurParameters(np.concatenate([interior, [np.exp(1j * rng.uniform(0, 2 * np.pi))]]))


# ---------------------------------------------------------------------------
# Hessenberg construction


def test_hessenberg_1x1():
    H = build_hessenberg(SchurParameters(np.array([1j])))
    assert H.shape == (1, 1)
    assert H[0, 0] == pytest.approx(-1j)  # conj of the only coefficient


def test_hessenberg_2x2_exact():
    H = build_hessenberg(SchurParameters(np.array([0.6, 1.0])))
    np.testing.assert_allclose(H.real, [[0.6, 0.8], [0.8, -0.6]], atol=1e-15)
    np.testing.assert_allclose(H.imag, 0, atol=1e-15)
    ev = np.sort(np.linalg.eigvals(H).real)
    np.testing.assert_allclose(ev, [-1.0, 1.0], atol=1e-12)


def test_hessenberg_unitarity_oracle():
    rng = np.random.default_rng(5)
    for _ in range(10):
        H = build_hessenberg(random_schur(5, rng))
        np.testing.assert_allclose(H.conj().T @ H, np.eye(5), atol=1e-12)


def test_hessenberg_structure():
    rng = np.random.default_rng(6)
    H = build_hessenberg(random_schur(6, rng))
    sub = np.diag(H, -1)
    assert np.all(sub.real > 0) and np.max(np.abs(sub.imag)) == 0
    below = np.tril(H, -2)
    assert np.max(np.abs(below)) == 0


def test_schur_parameters_validation():
    with pytest.raises(ValueError):
        SchurParameters(np.array([1.2, 1.0]))  # interior out of disk
    with pytest.raises(ValueError):
        SchurParameters(np.array([]))
    p = SchurParameters(np.array([0.3 + 0.1j, np.exp(0.4j)]))
    assert p.unitary_boundary
    assert not SchurParameters(np.array([0.1, 0.5])).unitary_boundary


@settings(max_examples=30, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=0.95, allow_nan=False), min_size=1, max_size=6))
def test_hessenberg_unitary_property(interior):
    alphas = np.array(list(interior) + [1.0 + 0j])
    H = build_hessenberg(SchurParameters(alphas))
    assert is_unitary(H, tol=1e-10)


# ---------------------------------------------------------------------------
# real orthogonal


def test_real_orthogonal_2x2():
    M = build_real_orthogonal(RealSchurParameters(np.array([0.0])))
    np.testing.assert_allclose(M, [[0.0, -1.0], [1.0, 0.0]], atol=1e-15)
    assert np.linalg.det(M) == pytest.approx(1.0)
    ev = np.linalg.eigvals(M)
    np.testing.assert_allclose(np.sort(np.angle(ev)), [-np.pi / 2, np.pi / 2], atol=1e-12)


def test_real_orthogonal_random():
    rng = np.random.default_rng(7)
    for _ in range(10):
        M = build_real_orthogonal(RealSchurParameters(rng.uniform(-0.9, 0.9, 5)))
        np.testing.assert_allclose(M.T @ M, np.eye(6), atol=1e-12)
        assert np.linalg.det(M) == pytest.approx(1.0, abs=1e-10)
        ev = np.linalg.eigvals(M)
        # conjugate pairs for a real matrix
        np.testing.assert_allclose(
            np.sort(np.angle(ev)), np.sort(-np.angle(ev)), atol=1e-9
        )


def test_real_schur_validation():
    with pytest.raises(ValueError):
        RealSchurParameters(np.array([0.5, 0.2]))  # even count
    with pytest.raises(ValueError):
        RealSchurParameters(np.array([1.0]))  # on the boundary


# ---------------------------------------------------------------------------
# eigen decompositions


def test_eigen_unit_permutation_matrix():
    eig = eigen_unit(np.array([[0.0, 1.0], [1.0, 0.0]]))
    np.testing.assert_allclose(eig.angles, [np.pi, 2 * np.pi], atol=1e-12)
    np.testing.assert_allclose(eig.weights, [0.5, 0.5], atol=1e-12)


def test_eigen_unit_1x1():
    phi = 2.13
    eig = eigen_unit(np.array([[np.exp(1j * phi)]]))
    assert eig.angles[0] == pytest.approx(phi)
    assert eig.weights[0] == pytest.approx(1.0)


def test_eigen_unit_weights_and_identity():
    rng = np.random.default_rng(11)
    H = build_hessenberg(random_schur(6, rng))
    eig = eigen_unit(H)
    assert abs(eig.weights.sum() - 1.0) <= 1e-10
    assert np.max(np.abs(np.abs(eig.eigenvalues) - 1.0)) <= 1e-10
    # resolvent cross-check at random shifts
    for _ in range(20):
        lam = 0.5 * np.exp(1j * rng.uniform(0, 2 * np.pi))
        lhs = resolvent_11(H, lam)
        rhs = np.sum(eig.weights / (eig.eigenvalues - lam))
        assert abs(lhs - rhs) / abs(rhs) <= 1e-9


def test_eigen_unit_rejects_non_unitary():
    with pytest.raises(ValueError):
        eigen_unit(np.array([[0.5, 0.0], [0.0, 1.0]]))


def test_eigen_unit_rejects_degenerate():
    rng = np.random.default_rng(3)
    S = dual_product(sample_haar(4, rng))
    with pytest.raises(DegenerateSpectrumError):
        eigen_unit(S)


def test_eigen_tridiag_1x1_and_2x2():
    one = eigen_symmetric_tridiag(TridiagonalMatrix(np.array([0.7]), np.array([])))
    assert one.eigenvalues[0] == pytest.approx(0.7)
    assert one.first_components[0] == pytest.approx(1.0)
    two = eigen_symmetric_tridiag(TridiagonalMatrix(np.array([0.0, 0.0]), np.array([1.0])))
    np.testing.assert_allclose(two.eigenvalues, [1.0, -1.0], atol=1e-12)
    np.testing.assert_allclose(two.first_components, [np.sqrt(0.5)] * 2, atol=1e-12)


def test_eigen_tridiag_vandermonde_product_oracle():
    # squared eigenvalue differences against the offdiagonal/weight product
    rng = np.random.default_rng(13)
    for _ in range(10):
        T = TridiagonalMatrix(rng.normal(size=5), rng.uniform(0.5, 1.5, 4))
        eig = eigen_symmetric_tridiag(T)
        lam, q = eig.eigenvalues, eig.first_components
        lhs = np.prod([(lam[i] - lam[j]) ** 2 for i in range(5) for j in range(i + 1, 5)])
        rhs = np.prod(T.offdiag ** (2 * np.arange(1, 5))) / np.prod(q**2)
        assert abs(lhs - rhs) / abs(rhs) <= 1e-9


def test_tridiagonal_layout_and_validation():
    T = TridiagonalMatrix(np.array([1.0, 2.0, 3.0]), np.array([0.5, 0.25]))
    M = T.matrix()
    assert M[0, 0] == 3.0 and M[2, 2] == 1.0 and M[0, 1] == 0.25 and M[2, 1] == 0.5
    with pytest.raises(ValueError):
        TridiagonalMatrix(np.array([1.0, 2.0]), np.array([0.0]))
    relaxed = TridiagonalMatrix.relaxed(np.array([1.0, 2.0]), np.array([0.0]))
    assert relaxed.offdiag[0] == 0.0


# ---------------------------------------------------------------------------
# resolvent


def test_resolvent_scalar():
    assert resolvent_11(np.array([[2.0]]), 0.5j) == pytest.approx(1.0 / (2.0 - 0.5j))


def test_resolvent_tridiagonal_eigen_sum():
    rng = np.random.default_rng(17)
    T = TridiagonalMatrix(rng.normal(size=3), rng.uniform(0.5, 1.5, 2))
    eig = eigen_symmetric_tridiag(T)
    lam = 0.37j
    lhs = resolvent_11(T.matrix(), lam)
    rhs = np.sum(eig.first_components**2 / (eig.eigenvalues - lam))
    assert abs(lhs - rhs) <= 1e-10 * abs(rhs)


def test_resolvent_singular_shift():
    with pytest.raises(SingularShiftError):
        resolvent_11(np.array([[1.0]]), 1.0)


# ---------------------------------------------------------------------------
# rank-1 perturbation


def test_rank1_identity_and_scalar():
    M = np.array([[0.3 + 0.1j, 1.0], [0.0, 2.0]])
    np.testing.assert_array_equal(rank1_row_scale(M, 1.0), M)
    np.testing.assert_allclose(rank1_row_scale(np.array([[0.5j]]), -1.0), [[-0.5j]])


def test_rank1_preserves_unitarity_and_scales_det():
    rng = np.random.default_rng(19)
    U = sample_haar(4, rng)
    t = np.exp(0.7j)
    Ut = rank1_row_scale(U, t)
    assert is_unitary(Ut, tol=1e-12)
    assert abs(np.linalg.det(Ut) - t * np.linalg.det(U)) <= 1e-10


def test_rank1_requires_unimodular():
    with pytest.raises(ValueError):
        rank1_row_scale(np.eye(2), 0.9)


def test_rank1_matches_seeded_recurrence():
    # eigenvalues of the row-scaled Hessenberg matrix equal the zeros of the
    # recurrence run seeded by t
    rng = np.random.default_rng(23)
    params = random_schur(5, rng)
    t = np.exp(1.3j)
    H = build_hessenberg(params)
    ang_matrix = eigen_unit(rank1_row_scale(H, t)).angles
    ang_poly = unit_circle_angles(szego_run(params.alphas, t).chi)
    np.testing.assert_allclose(ang_matrix, ang_poly, atol=1e-9)


# ---------------------------------------------------------------------------
# doubling and dual product


def test_realify_examples():
    np.testing.assert_allclose(realify_double(np.array([[1j]])), [[0.0, 1.0], [-1.0, 0.0]])
    np.testing.assert_allclose(realify_double(np.eye(3)), np.eye(6))


def test_realify_spectrum_and_orthogonality():
    rng = np.random.default_rng(29)
    U = sample_haar(3, rng)
    R = realify_double(U)
    assert np.max(np.abs(R.T @ R - np.eye(6))) <= 1e-12
    ang_u = np.angle(np.linalg.eigvals(U))
    ang_r = np.angle(np.linalg.eigvals(R))
    for a in ang_u:
        assert np.min(np.abs(ang_r - a)) <= 1e-9  # each angle survives
        assert np.min(np.abs(ang_r + a)) <= 1e-9  # alongside its conjugate


def test_dual_product_identity_case():
    S = dual_product(np.eye(2))
    np.testing.assert_allclose(S, -np.eye(2), atol=1e-15)


def test_dual_product_degenerate_pairs():
    rng = np.random.default_rng(31)
    S = dual_product(sample_haar(4, rng))
    assert is_unitary(S, tol=1e-12)
    ang = np.sort(np.angle(np.linalg.eigvals(S)) % (2 * np.pi))
    assert np.max(ang[1::2] - ang[0::2]) <= 1e-8
    with pytest.raises(ValueError):
        dual_product(np.eye(3))


def test_eigen_unit_paired_merges_weights():
    rng = np.random.default_rng(37)
    eig = eigen_unit_paired(dual_product(sample_haar(6, rng)))
    assert eig.n == 3
    assert abs(eig.weights.sum() - 1.0) <= 1e-10


def test_eigen_unit_paired_wraparound_pair():
    # a degenerate pair straddling the 2*pi boundary needs the rotated pairing
    eps = 1e-12
    U = np.diag(np.exp(1j * np.array([eps, -eps, np.pi / 2, np.pi / 2 + eps])))
    eig = eigen_unit_paired(U, pair_tol=1e-8)
    assert eig.n == 2
    assert eig.angles[-1] == pytest.approx(2 * np.pi, abs=1e-9)
    assert eig.angles[0] == pytest.approx(np.pi / 2, abs=1e-9)


def test_eigen_real_orthogonal_weights():
    rng = np.random.default_rng(41)
    M = build_real_orthogonal(RealSchurParameters(rng.uniform(-0.8, 0.8, 5)))
    eig = eigen_real_orthogonal(M)
    assert eig.n == 3
    assert np.all((eig.angles > 0) & (eig.angles < np.pi))
    assert abs(eig.weights.sum() - 1.0) <= 1e-10
