"""Critically sampled analysis filter banks and the square analysis matrix T_s.

An M-channel bank of length-L filters h_k[n] is applied blockwise: row
block j of T_s holds the time-reversed filters with their left edge at
column j*M, wrapped modulo N (circulant) or truncated (zero_tail).
With orthonormal filters the circulant T_s is an orthogonal matrix,
which is what makes the erasure-recovery oracles exact.
"""

import json
import math
import re
import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import BadBlockSize, UnsupportedM
from .frames import Frame, FrameBounds, frame_bounds
from .numerics import DEFAULT_TOL


class BoundaryMode(str, Enum):
    CIRCULANT = "circulant"
    ZERO_TAIL = "zero_tail"


@dataclass(frozen=True, eq=False)
class FilterSpec:
    """M analysis filters of common length L.

    coeffs[k][n] = h_k[n].  L must be a positive multiple of M (block
    L=M, lapped L=2M, or 2-channel banks of any even length).
    """

    channels: int
    length: int
    coeffs: np.ndarray
    name: str = "custom"

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.shape != (self.channels, self.length):
            raise ValueError(
                "coeffs shape %s does not match %d filters of length %d"
                % (c.shape, self.channels, self.length))
        if not np.all(np.isfinite(c)):
            raise ValueError("filter coefficients must be finite")
        if self.channels < 1:
            raise ValueError("need at least one channel")
        if self.length < self.channels or self.length % self.channels != 0:
            raise ValueError(
                "length %d must be a multiple of the channel count %d"
                % (self.length, self.channels))
        object.__setattr__(self, "coeffs", c)

    @property
    def M(self):
        return self.channels

    @property
    def L(self):
        return self.length


@dataclass(frozen=True, eq=False)
class PolyphaseMatrix:
    """Polyphase components E_{k,n}(z) = sum_m h_k[mM - n] z^-m.

    entries[k, n, m] holds the coefficient of z^-m in E_{k,n}.
    """

    channels: int
    entries: np.ndarray = field(repr=False)


def polyphase_decompose(f: FilterSpec) -> PolyphaseMatrix:
    """Split each filter into its M polyphase components."""
    M, L = f.M, f.L
    n_terms = (L - 1 + M - 1) // M + 1
    E = np.zeros((M, M, n_terms))
    for k in range(M):
        for n in range(M):
            for m in range(n_terms):
                idx = m * M - n
                if 0 <= idx < L:
                    E[k, n, m] = f.coeffs[k, idx]
    return PolyphaseMatrix(channels=M, entries=E)


def polyphase_reassemble(pm: PolyphaseMatrix, length: int) -> np.ndarray:
    """Inverse of polyphase_decompose: recover h_k[n] from E_{k,n}.

    H_k(z) = sum_n z^n E_{k,n}(z^M), so coefficient E[k,n,m] lands at
    tap index mM - n.
    """
    M = pm.channels
    h = np.zeros((M, length))
    n_terms = pm.entries.shape[2]
    for k in range(M):
        for n in range(M):
            for m in range(n_terms):
                idx = m * M - n
                if 0 <= idx < length:
                    h[k, idx] += pm.entries[k, n, m]
    return h


def build_Ts(f: FilterSpec, N: int, mode: BoundaryMode = BoundaryMode.CIRCULANT) -> np.ndarray:
    """N x N analysis matrix: blocks of time-reversed filters stepped by M.

    Row j*M+k holds (h_k[L-1], ..., h_k[0]) starting at column j*M,
    wrapped modulo N for circulant mode or cut off at column N-1 for
    zero_tail.
    """
    mode = BoundaryMode(mode)
    M, L = f.M, f.L
    if N % M != 0 or N < L:
        raise BadBlockSize("N=%d needs N %% %d == 0 and N >= %d" % (N, M, L))
    rev = f.coeffs[:, ::-1]
    T = np.zeros((N, N))
    for j in range(N // M):
        for k in range(M):
            for t in range(L):
                c = j * M + t
                if mode is BoundaryMode.CIRCULANT:
                    T[j * M + k, c % N] += rev[k, t]
                elif c < N:
                    T[j * M + k, c] = rev[k, t]
    return T


def validate_orthonormal(f: FilterSpec, tol=DEFAULT_TOL) -> bool:
    """True iff the filters shifted by multiples of M form an orthonormal set.

    Checked on a circulant analysis matrix with N >= 2L, where every
    infinite-sequence inner product appears exactly once in the row Gram.
    """
    M, L = f.M, f.L
    N = M * math.ceil(2 * L / M)
    T = build_Ts(f, N, BoundaryMode.CIRCULANT)
    gram = T @ T.T
    return bool(np.max(np.abs(gram - np.eye(N))) <= tol.eq_eps)


def _dct_rows(M: int) -> np.ndarray:
    # orthonormal DCT-II matrix, rows indexed by frequency k
    n = np.arange(M)
    D = np.cos(np.pi * (2 * n[None, :] + 1) * n[:, None] / (2 * M))
    D *= np.sqrt(2.0 / M)
    D[0] *= np.sqrt(0.5)
    return D


def _mlt_rows(M: int) -> np.ndarray:
    # modulated lapped transform, length 2M, sine window
    n = np.arange(2 * M)
    k = np.arange(M)
    window = np.sin((n + 0.5) * np.pi / (2 * M))
    mod = np.cos((n[None, :] + 0.5 + M / 2) * (k[:, None] + 0.5) * np.pi / M)
    return window[None, :] * np.sqrt(2.0 / M) * mod


def builtin_family(kind: str, M: int | None = None) -> FilterSpec:
    """Builtin orthonormal filter banks: haar, block_dct(M), lapped(M).

    `kind` may carry the channel count itself, e.g. "block_dct(4)".
    """
    m = re.fullmatch(r"\s*([a-z_]+)\s*(?:\(\s*(\d+)\s*\))?\s*", kind)
    if not m:
        raise ValueError("unrecognized filter kind %r" % kind)
    name, inline_m = m.group(1), m.group(2)
    if inline_m is not None:
        M = int(inline_m)

    if name == "haar":
        if M not in (None, 2):
            raise UnsupportedM("haar is a 2-channel bank")
        a = 1.0 / np.sqrt(2.0)
        coeffs = np.array([[a, a], [-a, a]])
        return FilterSpec(channels=2, length=2, coeffs=coeffs, name="haar")
    if name == "block_dct":
        if M is None or M < 2:
            raise UnsupportedM("block_dct needs M >= 2")
        # build_Ts reverses taps, so store rows pre-reversed
        return FilterSpec(channels=M, length=M, coeffs=_dct_rows(M)[:, ::-1],
                          name="block_dct(%d)" % M)
    if name == "lapped":
        if M is None or M < 2:
            raise UnsupportedM("lapped needs M >= 2")
        return FilterSpec(channels=M, length=2 * M, coeffs=_mlt_rows(M),
                          name="lapped(%d)" % M)
    raise ValueError("unknown builtin filter family %r" % name)


def fb_frame_bounds(f: FilterSpec, N: int, tol=DEFAULT_TOL) -> FrameBounds:
    """Frame bounds of the circulant analysis-matrix rows.

    No normalization is applied; with unit-norm rows a critically
    sampled bank satisfies A <= 1 <= B, with equality iff paraunitary.
    """
    T = build_Ts(f, N, BoundaryMode.CIRCULANT)
    return frame_bounds(Frame(T, tol), tol)


def load_filter(path, tol=DEFAULT_TOL) -> FilterSpec:
    """Read a FilterSpec from a JSON file.

    Expected document: {"name": str, "channels": M, "length": L,
    "coeffs": [[...], ...]}.  Warns (does not fail) when the filters
    are not shift-orthonormal, since T_s orthogonality is what the
    recovery guarantees rely on.
    """
    with open(path) as fh:
        doc = json.load(fh)
    try:
        spec = FilterSpec(channels=int(doc["channels"]), length=int(doc["length"]),
                          coeffs=np.asarray(doc["coeffs"], dtype=float),
                          name=str(doc.get("name", "custom")))
    except KeyError as exc:
        raise ValueError("filter file missing field %s" % exc) from exc
    if not validate_orthonormal(spec, tol):
        warnings.warn("filter %r is not shift-orthonormal; erasure-recovery "
                      "guarantees do not apply" % spec.name)
    return spec


def save_filter(spec: FilterSpec, path) -> None:
    doc = {"name": spec.name, "channels": spec.channels,
           "length": spec.length, "coeffs": spec.coeffs.tolist()}
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")
