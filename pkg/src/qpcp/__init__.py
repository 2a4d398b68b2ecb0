"""Principal component pursuit over the reals, complexes and quaternions.

The package decomposes a matrix X into a low-rank part A plus a sparse
part E by convex optimization, over any of the three scalar fields, and
applies the quaternionic variant to phase-aware singing-voice separation
of stereo audio.  See README.md for a tour; the demos/ scripts walk
through each capability.
"""

from .quaternion import (COMPLEX_FIELD, QUATERNION_FIELD, REAL_FIELD,
                         Quaternion, ScalarField)
from .linalg import (QMatrix, SvdResult, adjoint, complex_adjoint,
                     frobenius_norm, inner, max_abs, real_embedding,
                     spectral_norm, svd, svd_truncated, zeros_like)
from .prox import prox_l1, prox_trace, soft_threshold
from .solver import PcpSolution, SolverConfig, pcp_lambda, pcp_solve
from .spectral import (AudioClip, Spectrogram, StftConfig, apply_phase,
                       downmix, istft, mix_at_0db, quaternion_to_stereo,
                       resample_half, stereo_to_quaternion, stft)
from .pipeline import SeparationMode, SeparationResult, separate
from .metrics import (ClipScores, GlobalScores, aggregate, nsdr, score_clip,
                      sdr)
from .bench import (RecoveryReport, RecoverySpec, default_panel,
                    generate_instance, panel_success, quick_panel,
                    run_panel, run_recovery)
from .wavio import WavError, read_wav, write_wav

__version__ = "0.1.0"

__all__ = [
    "Quaternion", "ScalarField", "REAL_FIELD", "COMPLEX_FIELD",
    "QUATERNION_FIELD",
    "QMatrix", "SvdResult", "adjoint", "complex_adjoint", "frobenius_norm",
    "inner", "max_abs", "real_embedding", "spectral_norm", "svd",
    "svd_truncated", "zeros_like",
    "soft_threshold", "prox_l1", "prox_trace",
    "SolverConfig", "PcpSolution", "pcp_lambda", "pcp_solve",
    "AudioClip", "StftConfig", "Spectrogram", "stft", "istft", "downmix",
    "stereo_to_quaternion", "quaternion_to_stereo", "apply_phase",
    "resample_half", "mix_at_0db",
    "SeparationMode", "SeparationResult", "separate",
    "ClipScores", "GlobalScores", "sdr", "nsdr", "score_clip", "aggregate",
    "RecoverySpec", "RecoveryReport", "generate_instance", "run_recovery",
    "default_panel", "quick_panel", "run_panel", "panel_success",
    "WavError", "read_wav", "write_wav",
]
