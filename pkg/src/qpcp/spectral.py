"""STFT analysis/synthesis and the stereo/quaternion spectrogram plumbing.

The default framing is a 1411-point Hann window advanced 353 samples per
frame (75% overlap rounded to an integer hop).  Strict COLA does not hold
for that pair, so synthesis divides by the summed squared window, which
makes istft(stft(x)) an identity to rounding error for any window/hop
with full coverage.

A stereo pair of complex spectrograms (L, R) multiplexes into a single
quaternion spectrogram L + R*j, the representation that keeps both the
spectral phase and the inter-channel phase available to the solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Union

import numpy as np
import scipy.signal

from .linalg import QMatrix

__all__ = [
    "AudioClip",
    "StftConfig",
    "Spectrogram",
    "stft",
    "istft",
    "downmix",
    "stereo_to_quaternion",
    "quaternion_to_stereo",
    "apply_phase",
    "resample_half",
    "mix_at_0db",
]


@dataclass(frozen=True)
class AudioClip:
    """Uniformly sampled audio: float64 samples of shape (length, channels)."""

    data: np.ndarray
    sample_rate: int

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim == 1:
            data = data[:, None]
        if data.ndim != 2 or data.shape[1] not in (1, 2):
            raise ValueError("audio data must be (length,) mono or "
                             "(length, 1|2)")
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")
        object.__setattr__(self, "data", data)

    @classmethod
    def mono(cls, samples, sample_rate: int) -> "AudioClip":
        return cls(np.asarray(samples, dtype=np.float64).reshape(-1, 1),
                   sample_rate)

    @classmethod
    def stereo(cls, left, right, sample_rate: int) -> "AudioClip":
        left = np.asarray(left, dtype=np.float64).ravel()
        right = np.asarray(right, dtype=np.float64).ravel()
        if left.shape != right.shape:
            raise ValueError("stereo channels must have equal length")
        return cls(np.column_stack([left, right]), sample_rate)

    @property
    def channels(self) -> int:
        return self.data.shape[1]

    @property
    def length(self) -> int:
        return self.data.shape[0]

    @property
    def duration(self) -> float:
        return self.length / self.sample_rate

    def channel(self, i: int) -> np.ndarray:
        return self.data[:, i]

    def __add__(self, other: "AudioClip") -> "AudioClip":
        if not isinstance(other, AudioClip):
            return NotImplemented
        if (self.sample_rate != other.sample_rate
                or self.data.shape != other.data.shape):
            raise ValueError("clips must share sample rate and shape")
        return AudioClip(self.data + other.data, self.sample_rate)

    def __mul__(self, gain: float) -> "AudioClip":
        return AudioClip(self.data * float(gain), self.sample_rate)

    __rmul__ = __mul__

    def rms(self) -> float:
        return float(np.sqrt(np.mean(self.data ** 2)))


@dataclass(frozen=True)
class StftConfig:
    """Analysis framing: Hann window of ``window_length``, advanced by ``hop``."""

    window_length: int = 1411
    hop: int = 353

    def __post_init__(self):
        if self.window_length < 1:
            raise ValueError("window_length must be positive")
        if not 0 < self.hop <= self.window_length:
            raise ValueError("hop must satisfy 0 < hop <= window_length")

    @property
    def bins(self) -> int:
        return self.window_length // 2 + 1


SpectrogramData = Union[np.ndarray, QMatrix]


@dataclass(frozen=True)
class Spectrogram:
    """A bins-by-frames time-frequency matrix plus its framing metadata.

    ``data`` is real (magnitudes), complex (one channel) or a QMatrix
    (stereo multiplexed as L + R*j).  ``original_length`` remembers the
    exact sample count so synthesis can trim the padded tail.
    """

    data: SpectrogramData
    config: StftConfig
    original_length: int
    sample_rate: int

    def __post_init__(self):
        if self.data.shape[0] != self.config.bins:
            raise ValueError(f"expected {self.config.bins} frequency bins, "
                             f"got {self.data.shape[0]}")

    @property
    def bins(self) -> int:
        return self.data.shape[0]

    @property
    def frames(self) -> int:
        return self.data.shape[1]

    def with_data(self, data: SpectrogramData) -> "Spectrogram":
        return replace(self, data=data)

    def magnitude(self) -> "Spectrogram":
        """Entrywise magnitudes as a real-valued spectrogram."""
        return self.with_data(np.asarray(abs(self.data)))


@lru_cache(maxsize=8)
def _hann(length: int) -> np.ndarray:
    w = scipy.signal.windows.hann(length, sym=False)
    w.flags.writeable = False
    return w


def _frame_count(n: int, cfg: StftConfig) -> tuple[int, int]:
    """Number of full-window frames and padded length covering n samples."""
    pad = cfg.window_length - cfg.hop
    covered = n + 2 * pad
    frames = max(1, math.ceil((covered - cfg.window_length) / cfg.hop) + 1)
    return frames, (frames - 1) * cfg.hop + cfg.window_length


def stft(clip: AudioClip, config: StftConfig = StftConfig()) -> Spectrogram:
    """One-sided STFT of a mono clip.

    The signal is zero-padded by window_length - hop on both ends (plus a
    partial hop on the right) so that every sample falls under full
    analysis windows; frame t, bin f holds the windowed DFT coefficient
    sum_n w[n] x[n + t*hop] exp(-2*pi*i*f*n / window_length).
    """
    if clip.channels != 1:
        raise ValueError("stft expects a mono clip; downmix or transform "
                         "channels separately")
    x = clip.channel(0)
    w = _hann(config.window_length)
    pad = config.window_length - config.hop
    frames, padded = _frame_count(clip.length, config)
    xp = np.zeros(padded)
    xp[pad:pad + clip.length] = x
    windows = np.lib.stride_tricks.sliding_window_view(
        xp, config.window_length)[::config.hop]
    data = np.fft.rfft(windows * w, n=config.window_length, axis=1).T
    return Spectrogram(data, config, clip.length, clip.sample_rate)


def istft(spec: Spectrogram) -> AudioClip:
    """Weighted overlap-add inverse of :func:`stft`.

    Each frame is inverse-transformed, windowed again and accumulated;
    the sum is divided by the summed squared window, which makes the
    round trip exact (to rounding) without requiring COLA, and the result
    is trimmed to the recorded original length.
    """
    if isinstance(spec.data, QMatrix):
        raise TypeError("istft needs a complex spectrogram; demultiplex "
                        "quaternion spectrograms first")
    cfg = spec.config
    w = _hann(cfg.window_length)
    n = spec.original_length
    frames, padded = _frame_count(n, cfg)
    if spec.frames != frames:
        raise ValueError(f"spectrogram has {spec.frames} frames but the "
                         f"recorded length implies {frames}")
    pieces = np.fft.irfft(spec.data.T, n=cfg.window_length, axis=1) * w
    y = np.zeros(padded)
    wsq = np.zeros(padded)
    idx = (np.arange(frames) * cfg.hop)[:, None] + np.arange(cfg.window_length)
    np.add.at(y, idx, pieces)
    np.add.at(wsq, idx, np.broadcast_to(w ** 2, pieces.shape))
    y /= np.where(wsq > 1e-12, wsq, 1.0)
    pad = cfg.window_length - cfg.hop
    return AudioClip.mono(y[pad:pad + n], spec.sample_rate)


def downmix(clip: AudioClip) -> AudioClip:
    """Stereo to mono by the samplewise average (L + R) / 2."""
    if clip.channels != 2:
        raise ValueError("downmix expects a stereo clip")
    return AudioClip.mono(clip.data.mean(axis=1), clip.sample_rate)


def _require_matching(a: Spectrogram, b: Spectrogram) -> None:
    if (a.data.shape != b.data.shape or a.config != b.config
            or a.original_length != b.original_length
            or a.sample_rate != b.sample_rate):
        raise ValueError("spectrograms must share shape and framing")


def stereo_to_quaternion(left: Spectrogram, right: Spectrogram) -> Spectrogram:
    """Multiplex two complex spectrograms into one quaternion spectrogram.

    Entrywise q = L + R*j, i.e. components (Re L, Im L, Re R, Im R); a
    pure relabelling, inverted exactly by :func:`quaternion_to_stereo`.
    """
    _require_matching(left, right)
    data = QMatrix(np.asarray(left.data, dtype=np.complex128),
                   np.asarray(right.data, dtype=np.complex128))
    return left.with_data(data)


def quaternion_to_stereo(spec: Spectrogram) -> tuple[Spectrogram, Spectrogram]:
    """Split a quaternion spectrogram back into (left, right) complex ones."""
    if not isinstance(spec.data, QMatrix):
        raise TypeError("expected a quaternion spectrogram")
    return spec.with_data(spec.data.x.copy()), spec.with_data(spec.data.y.copy())


def apply_phase(magnitude: Spectrogram, phase_source: Spectrogram) -> Spectrogram:
    """Combine nonnegative magnitudes with the phases of another spectrogram.

    Entrywise m * exp(i arg(p)); wherever the phase source vanishes the
    magnitude is kept with zero phase.
    """
    _require_matching(magnitude, phase_source)
    mags = np.asarray(magnitude.data, dtype=np.float64)
    p = np.asarray(phase_source.data, dtype=np.complex128)
    pa = np.abs(p)
    unit = np.where(pa > 0.0, p / np.where(pa > 0.0, pa, 1.0), 1.0 + 0j)
    return phase_source.with_data(mags * unit)


@lru_cache(maxsize=1)
def _halfband_fir(taps: int = 65) -> np.ndarray:
    h = scipy.signal.firwin(taps, 0.5, window=("kaiser", 8.0))
    h.flags.writeable = False
    return h


def resample_half(clip: AudioClip) -> AudioClip:
    """Halve the sample rate: linear-phase Kaiser low-pass, then decimate by 2."""
    if clip.sample_rate % 2 != 0:
        raise ValueError("sample rate must be even to halve")
    h = _halfband_fir()
    out = np.column_stack([
        np.convolve(clip.channel(i), h, mode="same")[::2]
        for i in range(clip.channels)
    ])
    return AudioClip(out, clip.sample_rate // 2)


def mix_at_0db(voice: AudioClip, accomp: AudioClip
               ) -> tuple[AudioClip, AudioClip, AudioClip]:
    """Mix two stems at equal RMS power (0 dB signal-to-noise ratio).

    The voice stem is rescaled to the accompaniment's RMS before the sum.
    Returns (mixture, scaled_voice, accompaniment) so the scaled stems can
    serve as references when scoring the mix.
    """
    if voice.rms() == 0.0 or accomp.rms() == 0.0:
        raise ValueError("cannot balance a silent stem")
    scaled = voice * (accomp.rms() / voice.rms())
    return scaled + accomp, scaled, accomp
