import numpy as np
import pytest

from rfturbo.errors import (DimensionMismatch, NonSquare, NonSymmetric,
                            SingularGram)
from rfturbo.numerics import (Tolerance, complement_basis, gram_trace_inverse,
                              min_norm_least_squares, numerical_rank,
                              orthonormal_row_basis, sym_eig_extremes)


def mercedes_gram():
    # three unit vectors at mutual angle 120 degrees in the plane
    angles = np.array([np.pi / 2, np.pi / 2 + 2 * np.pi / 3, np.pi / 2 - 2 * np.pi / 3])
    F = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    return F.T @ F


def test_tolerance_defaults_and_validation():
    tol = Tolerance()
    assert tol.rank_eps == 1e-10 and tol.eq_eps == 1e-9
    with pytest.raises(ValueError):
        Tolerance(rank_eps=0.0)
    with pytest.raises(ValueError):
        Tolerance(eq_eps=1.5)


def test_sym_eig_extremes_identity():
    assert sym_eig_extremes(np.eye(2)) == (1.0, 1.0)


def test_sym_eig_extremes_diagonal():
    lo, hi = sym_eig_extremes(np.diag([2.0, 1.0]))
    assert lo == 1.0 and hi == 2.0


def test_sym_eig_extremes_mercedes_frame():
    lo, hi = sym_eig_extremes(mercedes_gram())
    assert abs(lo - 1.5) < 1e-12 and abs(hi - 1.5) < 1e-12


def test_sym_eig_extremes_rejects_bad_input():
    with pytest.raises(NonSquare):
        sym_eig_extremes(np.zeros((2, 3)))
    with pytest.raises(NonSymmetric):
        sym_eig_extremes(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_sym_eig_extremes_bounds_rayleigh_quotient():
    """lambda_min <= z^T S z <= lambda_max for unit z."""
    rng = np.random.default_rng(11)
    A = rng.standard_normal((6, 6))
    S = A + A.T
    lo, hi = sym_eig_extremes(S)
    for _ in range(1000):
        z = rng.standard_normal(6)
        z /= np.linalg.norm(z)
        r = z @ S @ z
        assert lo - 1e-9 <= r <= hi + 1e-9


def test_numerical_rank_examples():
    assert numerical_rank(np.eye(4)) == 4
    assert numerical_rank(np.array([[1.0, 2, 3], [1, 2, 3]])) == 1
    assert numerical_rank(np.zeros((3, 3))) == 0
    assert numerical_rank(np.array([[2.0, 0.0], [0.0, 0.0]])) == 1


def test_min_norm_least_squares_identity():
    b = np.array([3.0, -1.0, 2.0])
    assert np.allclose(min_norm_least_squares(np.eye(3), b), b)


def test_min_norm_least_squares_mean_of_pair():
    x = min_norm_least_squares(np.array([[1.0], [1.0]]), [1.0, 3.0])
    assert np.allclose(x, [2.0])


def test_min_norm_least_squares_square_solve():
    rng = np.random.default_rng(3)
    A = rng.standard_normal((5, 5)) + 5 * np.eye(5)
    b = rng.standard_normal(5)
    x = min_norm_least_squares(A, b)
    assert np.linalg.norm(A @ x - b) <= 1e-9 * np.linalg.norm(b)


def test_min_norm_least_squares_picks_min_norm():
    # underdetermined: solution must match the pseudoinverse answer
    rng = np.random.default_rng(4)
    A = rng.standard_normal((2, 5))
    b = rng.standard_normal(2)
    x = min_norm_least_squares(A, b)
    assert np.allclose(x, np.linalg.pinv(A) @ b, atol=1e-12)


def test_min_norm_least_squares_shape_check():
    with pytest.raises(DimensionMismatch):
        min_norm_least_squares(np.eye(3), [1.0, 2.0])


def test_gram_trace_inverse_orthogonal():
    q, _ = np.linalg.qr(np.random.default_rng(5).standard_normal((6, 6)))
    assert abs(gram_trace_inverse(q) - 6.0) < 1e-10


def test_gram_trace_inverse_stacked_orthogonal():
    q, _ = np.linalg.qr(np.random.default_rng(6).standard_normal((4, 4)))
    stacked = np.vstack([q, q[[2, 3, 0, 1]]])
    assert abs(gram_trace_inverse(stacked) - 2.0) < 1e-10


def test_gram_trace_inverse_diagonal():
    assert abs(gram_trace_inverse(np.diag([1.0, 2.0])) - 1.25) < 1e-12


def test_gram_trace_inverse_singular():
    with pytest.raises(SingularGram):
        gram_trace_inverse(np.array([[1.0, 0.0], [1.0, 0.0]]))


def test_gram_trace_inverse_matches_eigenvalue_sum():
    """trace((A^T A)^-1) = sum of reciprocal eigenvalues of A^T A."""
    rng = np.random.default_rng(7)
    for _ in range(20):
        A = rng.standard_normal((12, 8))
        expected = float(np.sum(1.0 / np.linalg.eigvalsh(A.T @ A)))
        assert abs(gram_trace_inverse(A) - expected) <= 1e-8 * abs(expected)


def test_orthonormal_row_basis_keeps_orthonormal_input():
    q, _ = np.linalg.qr(np.random.default_rng(8).standard_normal((5, 5)))
    basis, coeff = orthonormal_row_basis(q)
    assert np.allclose(basis, q, atol=1e-12)
    assert np.allclose(coeff, np.eye(5), atol=1e-12)


def test_orthonormal_row_basis_drops_zero_rows():
    basis, coeff = orthonormal_row_basis(np.array([[2.0, 0.0], [0.0, 0.0]]))
    assert np.allclose(basis, [[1.0, 0.0]])
    assert np.allclose(coeff, [[2.0], [0.0]])


def test_orthonormal_row_basis_properties():
    rng = np.random.default_rng(9)
    for _ in range(25):
        A = rng.standard_normal((3, 5))
        basis, coeff = orthonormal_row_basis(A)
        assert basis.shape == (3, 5)
        assert np.allclose(basis @ basis.T, np.eye(3), atol=1e-12)
        assert np.allclose(coeff @ basis, A, atol=1e-10)


def test_complement_basis_examples():
    comp = complement_basis(np.array([[1.0, 0.0]]), 2)
    assert comp.shape == (1, 2)
    assert np.allclose(np.abs(comp), [[0.0, 1.0]], atol=1e-14)
    q, _ = np.linalg.qr(np.random.default_rng(10).standard_normal((4, 4)))
    assert complement_basis(q, 4).shape == (0, 4)


def test_complement_basis_completes_orthogonal_matrix():
    rng = np.random.default_rng(12)
    for _ in range(10):
        q, _ = np.linalg.qr(rng.standard_normal((4, 4)))
        partial = q[:2]
        stacked = np.vstack([partial, complement_basis(partial, 4)])
        assert np.allclose(stacked @ stacked.T, np.eye(4), atol=1e-10)


def test_complement_basis_dimension_check():
    with pytest.raises(DimensionMismatch):
        complement_basis(np.eye(3), 2)


def test_basis_then_complement_is_orthogonal():
    rng = np.random.default_rng(13)
    A = rng.standard_normal((3, 6))
    basis, _ = orthonormal_row_basis(A)
    full = np.vstack([basis, complement_basis(basis, 6)])
    assert full.shape == (6, 6)
    assert np.allclose(full @ full.T, np.eye(6), atol=1e-10)
