"""rfturbo: rate-1/2 real-field erasure codes from stacked filter banks.

A length-N real block x is analyzed by a critically sampled filter
bank (square matrix T_s) and by a row-interleaved copy of it; the
stacked 2N x N matrix T sends x to a redundancy-2 codeword.  Erased
samples are recovered by least squares or one-shot orthogonal
projection whenever the surviving rows of T still span R^N, and the
package ships brute-force rank oracles plus the sigma^2 * trace MSE
formula to quantify when and how well that happens.
"""

from .channel import (ErasurePattern, QuantizerSpec, apply_erasure,
                      paired_burst, quantize, random_erasures)
from .codec import (CodeSpec, Codeword, EncodingMatrix, ReconstructionResult,
                    build_code, decode_least_squares, decode_projection,
                    decode_youla, deserialize, encode, serialize,
                    youla_iterate)
from .filterbank import (BoundaryMode, FilterSpec, PolyphaseMatrix, build_Ts,
                         builtin_family, fb_frame_bounds, load_filter,
                         polyphase_decompose, polyphase_reassemble,
                         save_filter, validate_orthonormal)
from .frames import (Frame, FrameBounds, analyze, dual_frame, frame_bounds,
                     is_uniform, synthesize)
from .interleaver import (Permutation, cycle_lengths, half_shift,
                          identity_perm, inverse, permute_rows, random_perm)
from .numerics import (Tolerance, complement_basis, gram_trace_inverse,
                       min_norm_least_squares, numerical_rank,
                       orthonormal_row_basis, sym_eig_extremes)
from .analysis import (MseReport, RecoverabilityReport, corollary1_table,
                       eigen_spread, empirical_mse, predicted_mse,
                       recoverable, verify_theorem1, verify_theorem2,
                       verify_theorem3)

__version__ = "0.1.0"
