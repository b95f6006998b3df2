"""Row interleavers: the half-shift permutation, seeded random permutations,
row application, and cycle structure."""

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import OddSize, SizeMismatch
from .numerics import as_matrix


@dataclass(frozen=True, eq=False)
class Permutation:
    """Bijection on [0, N); map[i] is where row i of the output comes from."""

    map: np.ndarray
    kind: str = "custom"
    seed: int | None = None

    def __post_init__(self):
        m = np.asarray(self.map, dtype=int)
        if m.ndim != 1:
            raise ValueError("permutation map must be one-dimensional")
        if sorted(m.tolist()) != list(range(m.shape[0])):
            raise ValueError("map is not a bijection on [0, %d)" % m.shape[0])
        object.__setattr__(self, "map", m)

    @property
    def size(self):
        return int(self.map.shape[0])


def identity_perm(N: int) -> Permutation:
    return Permutation(np.arange(N), kind="identity")


def half_shift(N: int) -> Permutation:
    """The paper-optimal interleaver: i -> (i + N/2) mod N."""
    if N % 2 != 0:
        raise OddSize("half_shift needs even N, got %d" % N)
    return Permutation((np.arange(N) + N // 2) % N, kind="half_shift")


def random_perm(N: int, seed: int) -> Permutation:
    """Uniform random permutation, deterministic per seed."""
    if N < 1:
        raise ValueError("N must be >= 1")
    rng = np.random.default_rng(seed)
    return Permutation(rng.permutation(N), kind="random", seed=seed)


def inverse(p: Permutation) -> Permutation:
    inv = np.empty(p.size, dtype=int)
    inv[p.map] = np.arange(p.size)
    return Permutation(inv, kind=p.kind + "^-1", seed=p.seed)


def permute_rows(T_s, p: Permutation) -> np.ndarray:
    """Row i of the result is row p.map[i] of the input."""
    T_s = as_matrix(T_s)
    if T_s.shape[0] != p.size:
        raise SizeMismatch(
            "matrix has %d rows, permutation size %d" % (T_s.shape[0], p.size))
    return T_s[p.map].copy()


def cycle_lengths(p: Permutation):
    """Cycle type of p as a sorted list; sums to p.size."""
    seen = np.zeros(p.size, dtype=bool)
    out = []
    for i in range(p.size):
        if seen[i]:
            continue
        n, j = 0, i
        while not seen[j]:
            seen[j] = True
            j = int(p.map[j])
            n += 1
        out.append(n)
    return sorted(out)


def cycle_type_str(p: Permutation) -> str:
    """Compact cycle-type label, e.g. '1^2 3^1' for cycle lengths [1,1,3]."""
    counts = Counter(cycle_lengths(p))
    return " ".join("%d^%d" % (ln, ct) for ln, ct in sorted(counts.items()))
