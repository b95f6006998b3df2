"""Stacked rate-1/2 code: T = [T_s; T_pi] with T_pi a row-permuted copy.

Encoding multiplies by T; decoding after erasures is (a) minimum-norm
least squares on the surviving rows, (b) the one-shot orthogonal
projection formula with its two subset applicability conditions, or
(c) the alternating-projection iteration, kept as a reference method.
"""

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .errors import (DimensionMismatch, EmptySurvivorSet, NotReconstructible,
                     SizeMismatch)
from .filterbank import BoundaryMode, FilterSpec, build_Ts
from .interleaver import Permutation, permute_rows
from .numerics import (DEFAULT_TOL, complement_basis, min_norm_least_squares,
                       numerical_rank, orthonormal_row_basis)

ROW_ORDER = "row_order"
PAPER_INTERLEAVED = "paper_interleaved"


@dataclass(frozen=True, eq=False)
class CodeSpec:
    """Parameters fixing one stacked code instance."""

    filter: FilterSpec
    N: int
    perm: Permutation
    mode: BoundaryMode = BoundaryMode.CIRCULANT

    def __post_init__(self):
        if self.perm.size != self.N:
            raise SizeMismatch(
                "permutation size %d, block size %d" % (self.perm.size, self.N))


@dataclass(frozen=True, eq=False)
class EncodingMatrix:
    spec: CodeSpec
    T_s: np.ndarray = field(repr=False)
    T_pi: np.ndarray = field(repr=False)
    T: np.ndarray = field(repr=False)

    @property
    def N(self):
        return self.spec.N


@dataclass(frozen=True, eq=False)
class Codeword:
    """Length-2N real codeword; y[i] = <row i of T, x> when in row order."""

    y: np.ndarray
    ordering: str = ROW_ORDER

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float).reshape(-1)
        if y.shape[0] % 2 != 0:
            raise DimensionMismatch("codeword length must be even")
        if self.ordering not in (ROW_ORDER, PAPER_INTERLEAVED):
            raise ValueError("unknown ordering %r" % self.ordering)
        object.__setattr__(self, "y", y)


@dataclass(frozen=True, eq=False)
class ReconstructionResult:
    x_hat: np.ndarray
    method: str
    residual: float
    rank_used: int
    reconstructible: bool
    iters: Optional[int] = None


def build_code(spec: CodeSpec) -> EncodingMatrix:
    """Assemble T_s, its row-permuted copy, and the stacked 2N x N matrix."""
    T_s = build_Ts(spec.filter, spec.N, spec.mode)
    T_pi = permute_rows(T_s, spec.perm)
    return EncodingMatrix(spec=spec, T_s=T_s, T_pi=T_pi,
                          T=np.vstack([T_s, T_pi]))


def encode(em: EncodingMatrix, x) -> Codeword:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != em.N:
        raise DimensionMismatch("x has length %d, code expects %d" % (x.shape[0], em.N))
    return Codeword(y=em.T @ x, ordering=ROW_ORDER)


def interleaved_map(two_n: int) -> np.ndarray:
    """Channel-order position map for 2-channel codes.

    serialized[i] = y_row_order[map[i]].  Within each half, subband-0
    samples go out in pairs of consecutive time blocks followed by the
    matching subband-1 pair; an odd trailing block stays in row order.
    """
    if two_n % 4 != 0:
        raise DimensionMismatch("interleaved ordering needs 2N divisible by 4")
    N = two_n // 2
    blocks = N // 2  # time blocks per half, 2 samples each
    half = []
    for t in range(0, blocks - blocks % 2, 2):
        half.extend([2 * t, 2 * (t + 1), 2 * t + 1, 2 * (t + 1) + 1])
    if blocks % 2:
        t = blocks - 1
        half.extend([2 * t, 2 * t + 1])
    half = np.asarray(half, dtype=int)
    return np.concatenate([half, half + N])


def serialize(cw: Codeword, ordering: str = ROW_ORDER) -> np.ndarray:
    """Emit the codeword values in the requested channel ordering."""
    if cw.ordering != ROW_ORDER:
        raise ValueError("serialize expects a row-order codeword")
    if ordering == ROW_ORDER:
        return cw.y.copy()
    if ordering == PAPER_INTERLEAVED:
        return cw.y[interleaved_map(cw.y.shape[0])]
    raise ValueError("unknown ordering %r" % ordering)


def deserialize(values, ordering: str = ROW_ORDER) -> Codeword:
    """Inverse of serialize; always returns a row-order codeword."""
    values = np.asarray(values, dtype=float).reshape(-1)
    if ordering == ROW_ORDER:
        return Codeword(y=values, ordering=ROW_ORDER)
    if ordering == PAPER_INTERLEAVED:
        y = np.empty_like(values)
        y[interleaved_map(values.shape[0])] = values
        return Codeword(y=y, ordering=ROW_ORDER)
    raise ValueError("unknown ordering %r" % ordering)


def _check_survivors(em, surviving):
    idx, vals = surviving
    idx = np.asarray(idx, dtype=int).reshape(-1)
    vals = np.asarray(vals, dtype=float).reshape(-1)
    if idx.shape[0] != vals.shape[0]:
        raise DimensionMismatch("%d indices but %d values" % (idx.shape[0], vals.shape[0]))
    if idx.shape[0] == 0:
        raise EmptySurvivorSet("no surviving samples")
    if np.unique(idx).shape[0] != idx.shape[0]:
        raise ValueError("surviving indices must be distinct")
    if idx.min() < 0 or idx.max() >= 2 * em.N:
        raise ValueError("surviving indices outside [0, %d)" % (2 * em.N))
    return idx, vals


def decode_least_squares(em: EncodingMatrix, surviving, tol=DEFAULT_TOL) -> ReconstructionResult:
    """Minimum-norm least squares over the surviving rows T_r."""
    idx, vals = _check_survivors(em, surviving)
    T_r = em.T[idx]
    x_hat = min_norm_least_squares(T_r, vals, tol)
    rank = numerical_rank(T_r, tol)
    residual = float(np.linalg.norm(T_r @ x_hat - vals))
    return ReconstructionResult(x_hat=x_hat, method="least_squares",
                                residual=residual, rank_used=rank,
                                reconstructible=(rank == em.N))


def _subspace_data(rows, values, N, tol):
    """Orthonormal basis of the surviving rows' span, the projection of x
    onto it (least-squares coefficient fit), and the complement basis."""
    basis, coeff_map = orthonormal_row_basis(rows, tol)
    if basis.shape[0]:
        w = min_norm_least_squares(coeff_map, values, tol)
        proj = basis.T @ w
    else:
        proj = np.zeros(N)
    comp = complement_basis(basis if basis.shape[0] else np.zeros((0, N)), N)
    return basis, proj, comp


def _contained(sub, sup, tol):
    # rowspace(sub) inside rowspace(sup)?  sup has orthonormal rows, so
    # the stack gains rank exactly when some row of sub sticks out.
    if sub.shape[0] == 0:
        return True
    if sup.shape[0] == 0:
        return False
    return numerical_rank(np.vstack([sup, sub]), tol) == sup.shape[0]


def decode_projection(em: EncodingMatrix, surviving, tol=DEFAULT_TOL) -> ReconstructionResult:
    """One-shot projection decoder.

    With P_a x from the surviving T_s rows and P_b x from the surviving
    T_pi rows: if the lost-direction space Q_a sits inside P_b,
    x_hat = P_a x + Q_a(P_b x); otherwise roles swap if Q_b sits inside
    P_a.  Raises NotReconstructible when neither condition holds.
    """
    idx, vals = _check_survivors(em, surviving)
    N = em.N
    in_a = idx < N
    Ba, pa_x, Qa = _subspace_data(em.T[idx[in_a]], vals[in_a], N, tol)
    Bb, pb_x, Qb = _subspace_data(em.T[idx[~in_a]], vals[~in_a], N, tol)

    if _contained(Qa, Bb, tol):
        x_hat = pa_x + Qa.T @ (Qa @ pb_x)
    elif _contained(Qb, Ba, tol):
        x_hat = pb_x + Qb.T @ (Qb @ pa_x)
    else:
        raise NotReconstructible(
            "lost directions escape both surviving spans "
            "(rank %d < %d)" % (numerical_rank(em.T[idx], tol), N))

    T_r = em.T[idx]
    rank = numerical_rank(T_r, tol)
    residual = float(np.linalg.norm(T_r @ x_hat - vals))
    return ReconstructionResult(x_hat=x_hat, method="projection",
                                residual=residual, rank_used=rank,
                                reconstructible=(rank == N))


class YoulaResult(NamedTuple):
    f: np.ndarray
    iters: int
    converged: bool


def _project(basis, v):
    return basis.T @ (basis @ v)


def youla_iterate(g, basis_a, basis_b, max_iters: int = 200, tol=DEFAULT_TOL) -> YoulaResult:
    """Alternating-projection restoration f_{k+1} = g + Q_a P_b f_k.

    Recovers the unknown f in span(basis_b) from g = P_a f.  Stops when
    the step is below eq_eps relative to the iterate; a non-converged
    run returns the last iterate with converged=False rather than
    raising.
    """
    g = np.asarray(g, dtype=float).reshape(-1)
    f = g.copy()
    for k in range(1, max_iters + 1):
        pb_f = _project(basis_b, f)
        f_next = g + pb_f - _project(basis_a, pb_f)
        step = np.linalg.norm(f_next - f)
        f = f_next
        if step <= tol.eq_eps * max(np.linalg.norm(f), 1.0):
            return YoulaResult(f=f, iters=k, converged=True)
    return YoulaResult(f=f, iters=max_iters, converged=False)


def decode_youla(em: EncodingMatrix, surviving, tol=DEFAULT_TOL,
                 max_iters: int = 200) -> ReconstructionResult:
    """Iterative decoder: recover the component of x lost from the T_s half.

    The unknown u = Q_a x lives in the complement of the surviving T_s
    row span; its projection onto the surviving T_pi span is computable
    from the observations, so youla_iterate applies with basis_a = B_b
    (observed span) and basis_b = Q_a (where the unknown lives).
    """
    idx, vals = _check_survivors(em, surviving)
    N = em.N
    in_a = idx < N
    Ba, pa_x, Qa = _subspace_data(em.T[idx[in_a]], vals[in_a], N, tol)
    Bb, pb_x, Qb = _subspace_data(em.T[idx[~in_a]], vals[~in_a], N, tol)

    # g = P_b u = P_b x - P_b P_a x, with P_b x read off the T_pi half
    if Bb.shape[0]:
        g = pb_x - _project(Bb, pa_x)
    else:
        g = np.zeros(N)
    res = youla_iterate(g, basis_a=Bb, basis_b=Qa, max_iters=max_iters, tol=tol)
    x_hat = pa_x + res.f

    T_r = em.T[idx]
    rank = numerical_rank(T_r, tol)
    residual = float(np.linalg.norm(T_r @ x_hat - vals))
    return ReconstructionResult(x_hat=x_hat, method="youla", residual=residual,
                                rank_used=rank,
                                reconstructible=(rank == N and res.converged),
                                iters=res.iters)
