"""Synthetic test signals, SNR-controlled mixing, and SNR measurement."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

__all__ = [
    "SnrReport",
    "SILENT_PREFIX",
    "mix_at_snr",
    "snr",
    "gen_white_noise",
    "gen_pink_noise",
    "gen_tone_speech",
]

# Leading silence emitted by gen_tone_speech, sized to cover the default
# noise-estimation region (five frames of 256 at half overlap needs 768).
SILENT_PREFIX = 5 * 256


@dataclass(frozen=True)
class SnrReport:
    """Per-clip evaluation row: SNR before and after one enhancement run."""

    clip_id: str
    method: str
    input_snr_db: float
    output_snr_db: float
    iterations: int


def mix_at_snr(
    speech: np.ndarray, noise: np.ndarray, target_db: float
) -> tuple[np.ndarray, float]:
    """Scale noise onto speech so the result sits at an exact target SNR.

    Parameters
    ----------
    speech : array
        Clean reference. Power is measured over its full extent.
    noise : array
        At least as long as speech; the excess is dropped.
    target_db : float
        Desired SNR in dB. math.inf bypasses mixing and returns the speech
        with scale 0.

    Returns
    -------
    (noisy, scale)
        noisy = speech + scale * noise, with
        scale = sqrt(P_speech / (P_noise * 10**(target_db / 10))).
    """
    speech = np.asarray(speech, dtype=np.float64)
    noise = np.asarray(noise, dtype=np.float64)
    if speech.ndim != 1 or noise.ndim != 1:
        raise ValueError("speech and noise must be one-dimensional")
    if noise.size < speech.size:
        raise ValueError(f"noise ({noise.size} samples) shorter than speech ({speech.size})")
    power_speech = float(np.mean(speech**2))
    if power_speech == 0.0:
        raise ValueError("speech is silent: SNR is undefined")
    if math.isinf(target_db) and target_db > 0:
        return speech.copy(), 0.0
    noise = noise[: speech.size]
    power_noise = float(np.mean(noise**2))
    if power_noise == 0.0:
        raise ValueError("noise is silent: cannot reach a finite SNR")
    scale = math.sqrt(power_speech / (power_noise * 10.0 ** (target_db / 10.0)))
    return speech + scale * noise, scale


def snr(reference: np.ndarray, estimate: np.ndarray) -> float:
    """Signal-to-noise ratio of an estimate against a clean reference, in dB.

    10*log10(sum(ref^2) / sum((est - ref)^2)); a residual of exactly zero
    returns math.inf.
    """
    reference = np.asarray(reference, dtype=np.float64)
    estimate = np.asarray(estimate, dtype=np.float64)
    if reference.shape != estimate.shape:
        raise ValueError(
            f"length mismatch: reference {reference.shape} vs estimate {estimate.shape}"
        )
    signal_energy = float(np.sum(reference**2))
    if signal_energy == 0.0:
        raise ValueError("reference is silent: SNR is undefined")
    residual = float(np.sum((estimate - reference) ** 2))
    if residual == 0.0:
        return math.inf
    return 10.0 * math.log10(signal_energy / residual)


def gen_white_noise(n: int, seed: int) -> np.ndarray:
    """Zero-mean unit-variance Gaussian noise, deterministic per seed."""
    if n < 1:
        raise ValueError("sample count must be positive")
    return np.random.default_rng(seed).standard_normal(n)


# One-pole sections approximating a 1/f power spectrum: each line is
# (pole, input gain) of y[t] = pole * y[t-1] + gain * x[t].
_PINK_SECTIONS = (
    (0.99886, 0.0555179),
    (0.99332, 0.0750759),
    (0.96900, 0.1538520),
    (0.86650, 0.3104856),
    (0.55000, 0.5329522),
    (-0.7616, -0.0168980),
)
_PINK_DIRECT = 0.5362
_PINK_DELAYED = 0.115926


def gen_pink_noise(n: int, seed: int) -> np.ndarray:
    """Pink noise from white noise through cascaded first-order filters.

    The section bank sums to a spectrum falling close to 3 dB per octave
    across the speech band. Output is standardized to zero mean and unit
    variance and is deterministic per seed.
    """
    if n < 1:
        raise ValueError("sample count must be positive")
    white = np.random.default_rng(seed).standard_normal(n)
    pink = _PINK_DIRECT * white
    for pole, gain in _PINK_SECTIONS:
        pink += lfilter([gain], [1.0, -pole], white)
    pink += lfilter([0.0, _PINK_DELAYED], [1.0], white)
    pink -= pink.mean()
    return pink / pink.std()


def gen_tone_speech(duration: float, rate: int = 16000, seed: int = 0) -> np.ndarray:
    """Voiced-speech stand-in: silence, then amplitude-modulated harmonics.

    The first SILENT_PREFIX samples are exactly zero so the default
    noise-estimation region sees pure noise after mixing. The active part is
    a low fundamental (120 to 180 Hz, seeded) with five decaying harmonics
    under a slow syllabic envelope, keeping nearly all energy below 1 kHz.
    Peak amplitude is 0.5. Deterministic per seed.
    """
    if duration < 0.5:
        raise ValueError(f"duration must be at least 0.5 s, got {duration}")
    if rate < 2000:
        raise ValueError(f"sample rate too low for the tone stack, got {rate}")
    n = round(duration * rate)
    if n <= SILENT_PREFIX:
        raise ValueError("clip too short to hold the silent prefix")
    rng = np.random.default_rng(seed)
    fundamental = rng.uniform(120.0, 180.0)
    envelope_rate = rng.uniform(2.0, 4.0)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=5)
    t = np.arange(n - SILENT_PREFIX) / rate
    active = np.zeros_like(t)
    for h in range(1, 6):
        active += np.sin(2.0 * np.pi * h * fundamental * t + phases[h - 1]) / h
    active *= 0.5 * (1.0 - np.cos(2.0 * np.pi * envelope_rate * t))
    active *= 0.5 / np.max(np.abs(active))
    return np.concatenate([np.zeros(SILENT_PREFIX), active])
