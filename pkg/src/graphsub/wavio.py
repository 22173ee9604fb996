"""Mono WAV input and output: 16-bit PCM and 32-bit float."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.io import wavfile

__all__ = ["AudioBuffer", "read_wav", "write_wav"]

_SCALE = 32768.0


@dataclass(frozen=True)
class AudioBuffer:
    """Float samples plus their sample rate. Values read from disk lie in [-1, 1]."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self) -> None:
        samples = np.array(self.samples, dtype=np.float64)
        if samples.ndim != 1 or samples.size == 0:
            raise ValueError("audio must be a non-empty mono vector")
        if self.sample_rate < 1:
            raise ValueError(f"sample rate must be positive, got {self.sample_rate}")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)


def read_wav(path: str | Path, *, downmix: bool = False) -> AudioBuffer:
    """Read a PCM16 or float32 WAV file into floats.

    PCM16 samples are scaled by 1/32768 into [-1, 1); float samples are
    clipped into [-1, 1]. Multichannel files are rejected unless downmix=True
    averages the channels. Other encodings raise.
    """
    try:
        rate, data = wavfile.read(str(path))
    except ValueError as exc:
        raise ValueError(f"{path}: not a readable WAV file ({exc})") from exc
    if data.dtype == np.int16:
        samples = data.astype(np.float64) / _SCALE
    elif data.dtype == np.float32:
        samples = np.clip(data.astype(np.float64), -1.0, 1.0)
    else:
        raise ValueError(
            f"{path}: unsupported sample format {data.dtype}; need 16-bit PCM or 32-bit float"
        )
    if samples.ndim == 2:
        if not downmix:
            raise ValueError(
                f"{path}: {samples.shape[1]} channels; pass downmix=True to average them"
            )
        samples = samples.mean(axis=1)
    if samples.size == 0:
        raise ValueError(f"{path}: empty data chunk")
    return AudioBuffer(samples, int(rate))


def write_wav(path: str | Path, buffer: AudioBuffer) -> int:
    """Write a buffer as mono 16-bit PCM. Returns how many samples clipped.

    Samples are clamped to [-1, 1], scaled by 32768, and rounded half away
    from zero; 1.0 therefore lands on 32767 and -1.0 on -32768. Values read
    back from a file written here reproduce the original PCM words exactly.
    """
    x = buffer.samples
    clipped = int(np.count_nonzero(np.abs(x) > 1.0))
    scaled = np.clip(x, -1.0, 1.0) * _SCALE
    rounded = np.trunc(scaled + np.copysign(0.5, scaled))
    pcm = np.clip(rounded, -_SCALE, _SCALE - 1).astype(np.int16)
    wavfile.write(str(path), buffer.sample_rate, pcm)
    return clipped
