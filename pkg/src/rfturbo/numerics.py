"""Dense real-matrix primitives used by every other module.

All routines work on plain 2-D float64 numpy arrays ("MatrixReal").
Rank decisions use a relative singular-value cutoff so results do not
depend on the overall scale of the encoding matrices.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonSquare, NonSymmetric, SingularGram


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds shared across the package.

    rank_eps: relative singular-value cutoff (sigma > rank_eps * sigma_max).
    eq_eps:   equality tolerance for floating-point comparisons.
    """

    rank_eps: float = 1e-10
    eq_eps: float = 1e-9

    def __post_init__(self):
        if not (0.0 < self.rank_eps < 1.0):
            raise ValueError("rank_eps must be in (0, 1)")
        if not (0.0 < self.eq_eps < 1.0):
            raise ValueError("eq_eps must be in (0, 1)")


DEFAULT_TOL = Tolerance()


def as_matrix(A):
    """Coerce to a 2-D float64 array and reject non-finite entries."""
    M = np.asarray(A, dtype=float)
    if M.ndim != 2:
        raise DimensionMismatch("expected a 2-D matrix, got ndim=%d" % M.ndim)
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix entries must be finite")
    return M


def sym_eig_extremes(S, tol=DEFAULT_TOL):
    """Smallest and largest eigenvalues of a symmetric matrix.

    Raises NonSquare / NonSymmetric (asymmetry beyond eq_eps relative to
    the largest entry) rather than silently symmetrizing.
    """
    S = as_matrix(S)
    n, m = S.shape
    if n != m:
        raise NonSquare("matrix is %dx%d" % (n, m))
    scale = np.max(np.abs(S)) if S.size else 0.0
    asym = np.max(np.abs(S - S.T)) if S.size else 0.0
    if asym > tol.eq_eps * max(scale, 1e-300):
        raise NonSymmetric("asymmetry %.3e exceeds %.3e" % (asym, tol.eq_eps * scale))
    w = np.linalg.eigvalsh(S)
    return float(w[0]), float(w[-1])


def numerical_rank(A, tol=DEFAULT_TOL):
    """Number of singular values above rank_eps times the largest one."""
    A = as_matrix(A)
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol.rank_eps * s[0]))


def min_norm_least_squares(A, b, tol=DEFAULT_TOL):
    """Minimum-norm x minimizing ||Ax - b||_2.

    Rank deficiency is permitted; the caller decides whether the rank
    was sufficient (see numerical_rank).
    """
    A = as_matrix(A)
    b = np.asarray(b, dtype=float).reshape(-1)
    if A.shape[0] != b.shape[0]:
        raise DimensionMismatch(
            "A has %d rows but b has %d entries" % (A.shape[0], b.shape[0]))
    if A.shape[0] == 0:
        return np.zeros(A.shape[1])
    x, _, _, _ = np.linalg.lstsq(A, b, rcond=tol.rank_eps)
    return x


def gram_trace_inverse(A, tol=DEFAULT_TOL):
    """trace((A^T A)^-1), computed from singular values as sum 1/sigma_i^2."""
    A = as_matrix(A)
    ncols = A.shape[1]
    if ncols < 1:
        raise DimensionMismatch("matrix must have at least one column")
    s = np.linalg.svd(A, compute_uv=False) if A.size else np.zeros(0)
    r = int(np.count_nonzero(s > tol.rank_eps * s[0])) if s.size and s[0] > 0 else 0
    if r < ncols:
        raise SingularGram("rank %d < %d columns" % (r, ncols))
    return float(np.sum(1.0 / s[:ncols] ** 2))


def orthonormal_row_basis(A, tol=DEFAULT_TOL):
    """Orthonormal rows spanning rowspace(A), plus the coefficient map.

    Returns (basis, coeff_map) with A = coeff_map @ basis.  Built by
    modified Gram-Schmidt in row order with one reorthogonalization
    pass, so an input that already has orthonormal rows comes back
    unchanged (basis = A, coeff_map = I).  Rows whose residual falls
    below rank_eps times the largest row norm are dropped.
    """
    A = as_matrix(A)
    if A.shape[0] == 0:
        return A.copy(), np.zeros((0, 0))
    scale = float(np.max(np.linalg.norm(A, axis=1), initial=0.0))
    rows = []
    for a in A:
        v = a.copy()
        for q in rows:  # two MGS passes: orthogonalize, then clean up
            v -= (q @ v) * q
        for q in rows:
            v -= (q @ v) * q
        nv = np.linalg.norm(v)
        if scale > 0.0 and nv > tol.rank_eps * scale:
            rows.append(v / nv)
    basis = np.array(rows) if rows else np.zeros((0, A.shape[1]))
    coeff_map = A @ basis.T
    return basis, coeff_map


def complement_basis(basis, ambient_dim):
    """Orthonormal rows spanning the orthogonal complement of rowspace(basis).

    `basis` must have orthonormal rows inside R^ambient_dim; the result
    has ambient_dim - rows(basis) rows (possibly zero).
    """
    basis = as_matrix(basis)
    r, n = basis.shape
    if n != ambient_dim or r > ambient_dim:
        raise DimensionMismatch(
            "basis is %dx%d, ambient dimension %d" % (r, n, ambient_dim))
    if r == 0:
        return np.eye(ambient_dim)
    # right singular vectors beyond the row rank span the complement
    _, _, vh = np.linalg.svd(basis, full_matrices=True)
    return vh[r:]
