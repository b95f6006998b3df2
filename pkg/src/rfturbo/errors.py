"""Exception types shared across the package.

Every domain error derives from RfturboError so callers (and the CLI)
can distinguish "your inputs are bad" from genuine bugs.
"""


class RfturboError(Exception):
    """Base class for all package-specific errors."""


# ---- numerics ----

class NonSquare(RfturboError):
    """Matrix expected to be square is not."""


class NonSymmetric(RfturboError):
    """Symmetric eigensolver given a matrix whose asymmetry exceeds tolerance."""


class SingularGram(RfturboError):
    """Gram matrix is numerically rank-deficient where an inverse is required."""


class DimensionMismatch(RfturboError):
    """Operands have incompatible shapes."""


# ---- frames ----

class NotAFrame(RfturboError):
    """Vector family does not span the ambient space (rank < dimension)."""


# ---- filterbank ----

class BadBlockSize(RfturboError):
    """Analysis-matrix size N incompatible with the filter bank (N % M != 0 or N < L)."""


class UnsupportedM(RfturboError):
    """Requested builtin filter family is not defined for this channel count."""


# ---- interleaver ----

class OddSize(RfturboError):
    """half_shift needs an even block size."""


class SizeMismatch(RfturboError):
    """Permutation or pattern size disagrees with its operand."""


# ---- codec ----

class EmptySurvivorSet(RfturboError):
    """Decoder called with zero surviving samples."""


class NotReconstructible(RfturboError):
    """Erasure pattern leaves the survivor rows rank-deficient (no unique recovery)."""


class MaxItersExceeded(RfturboError):
    """Iterative decoder hit its iteration cap before meeting tolerance."""


# ---- channel ----

class BadRange(RfturboError):
    """Burst start or length outside the valid range."""


class BadCount(RfturboError):
    """Requested erasure count exceeds what the pattern can hold."""


# ---- analysis ----

class BoundaryCase(RfturboError):
    """Theorem premise unsatisfiable for these parameters (strict inequality fails)."""
