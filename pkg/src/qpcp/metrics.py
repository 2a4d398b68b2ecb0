"""Separation quality measures: SDR, NSDR and length-weighted aggregates.

The SDR here projects the estimate onto the reference signal itself (a
single scalar coefficient) rather than onto the 512-tap filter subspace
of the full BSS Eval toolkit.  The two agree for a filter length of one;
absolute dB values are therefore NOT comparable with published BSS Eval
numbers.  NSDR, being a difference of SDRs against the mixture baseline,
stays meaningful under any fixed SDR definition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .spectral import AudioClip

__all__ = ["DB_CAP", "ClipScores", "GlobalScores", "sdr", "nsdr",
           "score_clip", "aggregate"]

DB_CAP = 300.0  # stand-in for +/- infinity when serializing


def _flat(clip: AudioClip) -> np.ndarray:
    # channels concatenated, so stereo projects as one long vector
    return clip.data.T.ravel()


def _check_comparable(estimate: AudioClip, reference: AudioClip) -> None:
    if estimate.data.shape != reference.data.shape:
        raise ValueError("estimate and reference must have equal length "
                         "and channel count")


def sdr(estimate: AudioClip, reference: AudioClip) -> float:
    """Source-to-distortion ratio in dB via scalar projection.

    The target is the projection of the estimate onto the reference, so
    the measure ignores positive rescaling of the estimate.  Results are
    capped at +/-300 dB; a silent reference is an error.
    """
    _check_comparable(estimate, reference)
    e = _flat(estimate)
    r = _flat(reference)
    r_energy = float(r @ r)
    if r_energy == 0.0:
        raise ValueError("reference is silent; SDR is undefined")
    coeff = float(e @ r) / r_energy
    target = coeff * r
    target_energy = float(target @ target)
    noise = e - target
    noise_energy = float(noise @ noise)
    if target_energy == 0.0:
        return -DB_CAP
    if noise_energy == 0.0:
        return DB_CAP
    value = 10.0 * np.log10(target_energy / noise_energy)
    return float(np.clip(value, -DB_CAP, DB_CAP))


def nsdr(estimate: AudioClip, reference: AudioClip,
         mixture: AudioClip) -> float:
    """SDR improvement of the estimate over using the raw mixture."""
    _check_comparable(mixture, reference)
    return sdr(estimate, reference) - sdr(mixture, reference)


@dataclass(frozen=True)
class ClipScores:
    """Per-clip voice/accompaniment scores in dB plus the clip length."""

    sdr_voice: float
    sdr_accomp: float
    nsdr_voice: float
    nsdr_accomp: float
    clip_length: int


@dataclass(frozen=True)
class GlobalScores:
    """Length-weighted aggregate scores (the G-measures) in dB."""

    gsdr_voice: float
    gsdr_accomp: float
    gnsdr_voice: float
    gnsdr_accomp: float
    total_length: int


def score_clip(est_voice: AudioClip, est_accomp: AudioClip,
               ref_voice: AudioClip, ref_accomp: AudioClip,
               mixture: AudioClip) -> ClipScores:
    """Score one separated clip against its reference stems."""
    sdr_v = sdr(est_voice, ref_voice)
    sdr_a = sdr(est_accomp, ref_accomp)
    return ClipScores(
        sdr_voice=sdr_v,
        sdr_accomp=sdr_a,
        nsdr_voice=sdr_v - sdr(mixture, ref_voice),
        nsdr_accomp=sdr_a - sdr(mixture, ref_accomp),
        clip_length=ref_voice.length,
    )


def aggregate(scores: Sequence[ClipScores]) -> GlobalScores:
    """Weighted average of clip scores, weights proportional to clip length."""
    if not scores:
        raise ValueError("cannot aggregate an empty score list")
    lengths = np.array([s.clip_length for s in scores], dtype=np.float64)
    total = lengths.sum()

    def wavg(values):
        return float(np.dot(lengths, values) / total)

    return GlobalScores(
        gsdr_voice=wavg([s.sdr_voice for s in scores]),
        gsdr_accomp=wavg([s.sdr_accomp for s in scores]),
        gnsdr_voice=wavg([s.nsdr_voice for s in scores]),
        gnsdr_accomp=wavg([s.nsdr_accomp for s in scores]),
        total_length=int(total),
    )
