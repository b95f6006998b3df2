"""Erasure patterns on the length-2N codeword and the uniform quantizer.

The paired-loss channel couples positions i and i+N (both halves of a
sample travel in one packet): a paired pattern is closed under i <-> i+N.
"""

from dataclasses import dataclass

import numpy as np

from .errors import BadCount, BadRange, SizeMismatch


@dataclass(frozen=True, eq=False)
class ErasurePattern:
    """Lost codeword positions out of [0, 2N)."""

    N: int
    lost: np.ndarray
    paired: bool = False

    def __post_init__(self):
        lost = np.unique(np.asarray(self.lost, dtype=int))
        if lost.size and (lost[0] < 0 or lost[-1] >= 2 * self.N):
            raise ValueError("lost indices must lie in [0, %d)" % (2 * self.N))
        if self.paired:
            low = set(lost[lost < self.N].tolist())
            high = set((lost[lost >= self.N] - self.N).tolist())
            if low != high:
                raise ValueError("pattern marked paired but not closed under i <-> i+N")
        object.__setattr__(self, "lost", lost)

    @property
    def survivors(self):
        keep = np.ones(2 * self.N, dtype=bool)
        keep[self.lost] = False
        return np.flatnonzero(keep)


@dataclass(frozen=True)
class QuantizerSpec:
    """Uniform midtread quantizer of step delta; modeled noise variance delta^2/12."""

    delta: float

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("quantizer step must be positive")

    @property
    def variance(self):
        return self.delta ** 2 / 12.0


def paired_burst(N: int, start: int, pairs: int) -> ErasurePattern:
    """Lose `pairs` consecutive positions starting at `start` (mod N), plus
    their partners N places later."""
    if not (0 <= start < N):
        raise BadRange("start %d outside [0, %d)" % (start, N))
    if not (1 <= pairs <= N):
        raise BadRange("pairs %d outside [1, %d]" % (pairs, N))
    low = (start + np.arange(pairs)) % N
    return ErasurePattern(N=N, lost=np.concatenate([low, low + N]), paired=True)


def random_erasures(N: int, count: int, paired: bool, seed: int) -> ErasurePattern:
    """Uniformly random pattern; `count` is pairs when paired, else positions."""
    rng = np.random.default_rng(seed)
    if paired:
        if not (0 <= count <= N):
            raise BadCount("pair count %d outside [0, %d]" % (count, N))
        low = rng.choice(N, size=count, replace=False)
        lost = np.concatenate([low, low + N])
    else:
        if not (0 <= count <= 2 * N):
            raise BadCount("count %d outside [0, %d]" % (count, 2 * N))
        lost = rng.choice(2 * N, size=count, replace=False)
    return ErasurePattern(N=N, lost=lost, paired=paired)


def apply_erasure(y, p: ErasurePattern):
    """Return (surviving indices, surviving values), order preserved, values
    untouched."""
    y = np.asarray(y, dtype=float).reshape(-1)
    if y.shape[0] != 2 * p.N:
        raise SizeMismatch("codeword length %d, pattern expects %d" % (y.shape[0], 2 * p.N))
    idx = p.survivors
    return idx, y[idx]


def quantize(y, q: QuantizerSpec) -> np.ndarray:
    """Midtread uniform quantization: delta * round(y / delta)."""
    y = np.asarray(y, dtype=float)
    return q.delta * np.round(y / q.delta)


def pattern_to_dict(p: ErasurePattern) -> dict:
    return {"N": p.N, "lost": p.lost.tolist(), "paired": bool(p.paired)}


def pattern_from_dict(doc: dict) -> ErasurePattern:
    try:
        return ErasurePattern(N=int(doc["N"]),
                              lost=np.asarray(doc["lost"], dtype=int),
                              paired=bool(doc.get("paired", False)))
    except KeyError as exc:
        raise ValueError("pattern document missing field %s" % exc) from exc
