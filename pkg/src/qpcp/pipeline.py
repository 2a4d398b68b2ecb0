"""End-to-end singing-voice separation at three levels of phase awareness.

All three paths decompose a spectrogram X into low-rank A (repetitive
accompaniment) plus sparse E (voice) and resynthesize both:

* real      - PCP on the magnitude spectrogram; phases are lost and the
              mixture's phases are copied back in before synthesis.
* complex   - PCP directly on the complex spectrogram of the downmix;
              the spectral phase rides through the solver.
* quaternion - PCP on the stereo pair multiplexed as L + R*j; both the
              spectral and the inter-channel phase are preserved, and
              stereo stems come back out.

In the complex and quaternion paths A + E equals the processed mixture
to solver tolerance, so the stems sum back to the input; magnitude
processing (real path) has no such additivity.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .solver import PcpSolution, SolverConfig, pcp_solve
from .spectral import (AudioClip, StftConfig, apply_phase, downmix, istft,
                       quaternion_to_stereo, stereo_to_quaternion, stft)

__all__ = ["SeparationMode", "SeparationResult", "separate"]


class SeparationMode(enum.Enum):
    REAL = "real"
    COMPLEX = "complex"
    QUATERNION = "quaternion"


@dataclass
class SeparationResult:
    """Separated stems plus the solver diagnostics that produced them.

    voice comes from the sparse part, accompaniment from the low-rank
    part.  Both keep the input's sample rate and length; in quaternion
    mode they are stereo, otherwise mono (stereo inputs are downmixed).
    """

    accompaniment: AudioClip
    voice: AudioClip
    solver_report: PcpSolution
    mode: SeparationMode


def separate(mixture: AudioClip,
             mode: SeparationMode = SeparationMode.COMPLEX,
             solver: SolverConfig = SolverConfig(),
             stft_cfg: StftConfig = StftConfig(),
             ) -> SeparationResult:
    """Split a mixture into accompaniment and voice stems.

    Quaternion mode requires stereo input; the other modes downmix
    stereo.  Solver non-convergence is reported on the returned
    solver_report, not raised.
    """
    if mixture.length == 0:
        raise ValueError("mixture is empty")
    if mode == SeparationMode.QUATERNION:
        if mixture.channels != 2:
            raise ValueError("quaternion mode requires a stereo mixture")
        return _separate_quaternion(mixture, solver, stft_cfg)

    mono = downmix(mixture) if mixture.channels == 2 else mixture
    spec = stft(mono, stft_cfg)
    if mode == SeparationMode.COMPLEX:
        sol = pcp_solve(spec.data, solver)
        accomp = istft(spec.with_data(sol.A))
        voice = istft(spec.with_data(sol.E))
    elif mode == SeparationMode.REAL:
        sol = pcp_solve(np.abs(spec.data), solver)
        # the real prox can push magnitude estimates negative; clamp
        # before gluing the mixture phases back on
        accomp = istft(apply_phase(
            spec.with_data(np.maximum(sol.A, 0.0)), spec))
        voice = istft(apply_phase(
            spec.with_data(np.maximum(sol.E, 0.0)), spec))
    else:
        raise ValueError(f"unknown mode: {mode!r}")
    return SeparationResult(accomp, voice, sol, mode)


def _separate_quaternion(mixture: AudioClip, solver: SolverConfig,
                         stft_cfg: StftConfig) -> SeparationResult:
    left = stft(AudioClip.mono(mixture.channel(0), mixture.sample_rate),
                stft_cfg)
    right = stft(AudioClip.mono(mixture.channel(1), mixture.sample_rate),
                 stft_cfg)
    spec = stereo_to_quaternion(left, right)
    sol = pcp_solve(spec.data, solver)
    a_l, a_r = quaternion_to_stereo(spec.with_data(sol.A))
    e_l, e_r = quaternion_to_stereo(spec.with_data(sol.E))
    accomp = AudioClip.stereo(istft(a_l).channel(0), istft(a_r).channel(0),
                              mixture.sample_rate)
    voice = AudioClip.stereo(istft(e_l).channel(0), istft(e_r).channel(0),
                             mixture.sample_rate)
    return SeparationResult(accomp, voice, sol, SeparationMode.QUATERNION)
