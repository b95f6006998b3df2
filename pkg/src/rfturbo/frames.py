"""Finite frames over R^K.

A frame is stored through its operator F (one vector per row).  Bounds
A, B are the extreme eigenvalues of F^T F; the dual frame applies
(F^T F)^-1 to each vector and enables reconstruction from analysis
coefficients.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotAFrame
from .numerics import DEFAULT_TOL, as_matrix, numerical_rank, sym_eig_extremes


@dataclass(frozen=True)
class FrameBounds:
    A: float
    B: float
    tight: bool
    snug_ratio: float


class Frame:
    """Finite set of vectors spanning R^dim, held as rows of `operator`."""

    def __init__(self, vectors, tol=DEFAULT_TOL):
        F = as_matrix(vectors)
        n_f, k = F.shape
        if n_f < k or numerical_rank(F, tol) < k:
            raise NotAFrame("%d vectors of dimension %d do not span" % (n_f, k))
        self.operator = F
        self.dim = k
        self.size = n_f

    @property
    def vectors(self):
        return self.operator


def frame_bounds(f: Frame, tol=DEFAULT_TOL) -> FrameBounds:
    """Extreme eigenvalues of F^T F; tight means B - A <= eq_eps * B."""
    F = f.operator
    a, b = sym_eig_extremes(F.T @ F, tol)
    if a <= 0:
        raise NotAFrame("lower frame bound is not positive")
    tight = (b - a) <= tol.eq_eps * b
    return FrameBounds(A=a, B=b, tight=tight, snug_ratio=b / a)


def is_uniform(f: Frame, tol=DEFAULT_TOL) -> bool:
    """True iff every frame vector has unit norm within eq_eps."""
    norms = np.linalg.norm(f.operator, axis=1)
    return bool(np.all(np.abs(norms - 1.0) <= tol.eq_eps))


def dual_frame(f: Frame, tol=DEFAULT_TOL) -> Frame:
    """Frame of vectors (F^T F)^-1 phi_k; bounds are (1/B, 1/A) of f.

    Computed by solving (F^T F) X = F^T rather than forming the inverse.
    """
    F = f.operator
    gram = F.T @ F
    try:
        dual_t = np.linalg.solve(gram, F.T)
    except np.linalg.LinAlgError as exc:
        raise NotAFrame("frame operator Gram is singular") from exc
    return Frame(dual_t.T, tol)


def analyze(f: Frame, z) -> np.ndarray:
    """Frame expansion coefficients <z, phi_k> = F z."""
    z = np.asarray(z, dtype=float).reshape(-1)
    if z.shape[0] != f.dim:
        raise DimensionMismatch("z has length %d, frame dimension %d" % (z.shape[0], f.dim))
    return f.operator @ z


def synthesize(f: Frame, coeffs, tol=DEFAULT_TOL) -> np.ndarray:
    """Reconstruct z = sum_k coeffs[k] * dual(phi_k)."""
    c = np.asarray(coeffs, dtype=float).reshape(-1)
    if c.shape[0] != f.size:
        raise DimensionMismatch(
            "coeffs has length %d, frame size %d" % (c.shape[0], f.size))
    return dual_frame(f, tol).operator.T @ c
