"""WAV file reading and writing (PCM 16-bit and IEEE float32).

Integer samples are normalized to [-1, 1) floats on read; writing
chooses between float32 (default, keeps levels untouched) and PCM16
(scaled and clipped to the integer range).  Anything fancier than WAV
is out of scope; transcode externally.
"""

from __future__ import annotations

import os
import tempfile

import numpy as np
import scipy.io.wavfile

from .spectral import AudioClip

__all__ = ["WavError", "read_wav", "write_wav"]


class WavError(Exception):
    """Unreadable, unsupported or unwritable WAV data."""


_SCALES = {
    np.dtype(np.int16): 1 << 15,
    np.dtype(np.int32): 1 << 31,
}


def read_wav(path) -> AudioClip:
    """Read a mono or stereo WAV file into an AudioClip.

    PCM16 and float32 are the supported encodings (PCM32 and float64 are
    accepted too since they decode the same way).
    """
    try:
        rate, data = scipy.io.wavfile.read(path)
    except FileNotFoundError:
        raise
    except Exception as exc:
        raise WavError(f"cannot read WAV file {path}: {exc}") from exc
    if data.ndim == 1:
        data = data[:, None]
    if data.ndim != 2 or data.shape[1] not in (1, 2):
        raise WavError(f"{path}: expected 1 or 2 channels, "
                       f"got shape {data.shape}")
    if data.dtype in _SCALES:
        samples = data.astype(np.float64) / _SCALES[data.dtype]
    elif data.dtype == np.uint8:
        samples = (data.astype(np.float64) - 128.0) / 128.0
    elif data.dtype in (np.float32, np.float64):
        samples = data.astype(np.float64)
    else:
        raise WavError(f"{path}: unsupported sample format {data.dtype}")
    return AudioClip(samples, int(rate))


def write_wav(path, clip: AudioClip, sample_format: str = "float32") -> None:
    """Write an AudioClip as WAV; atomic (temp file + rename).

    sample_format is "float32" or "pcm16"; PCM16 output is clipped to
    the representable range.
    """
    if sample_format == "float32":
        data = clip.data.astype(np.float32)
    elif sample_format == "pcm16":
        scaled = np.clip(np.round(clip.data * 32767.0), -32768, 32767)
        data = scaled.astype(np.int16)
    else:
        raise ValueError(f"unknown sample format: {sample_format!r}")
    if data.shape[1] == 1:
        data = data[:, 0]
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(suffix=".wav", dir=directory)
    try:
        os.close(fd)
        scipy.io.wavfile.write(tmp, clip.sample_rate, data)
        os.replace(tmp, path)
    except Exception as exc:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise WavError(f"cannot write WAV file {path}: {exc}") from exc
