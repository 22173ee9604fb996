"""Ordinary-FFT spectral subtraction, the reference the graph pipeline is judged against.

Same segmentation and overlap-add scaffolding as the graph path, but frames
go through a Hamming window and a plain real FFT. Keeping everything else
identical isolates the transform choice as the only difference.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .enhance import _iterate, _region_sample_span
from .framing import FramePlan, overlap_add, segment

__all__ = ["BaselineConfig", "bss", "ibss"]


@dataclass(frozen=True)
class BaselineConfig:
    """Knobs for bss/ibss; noise_frames leading frames are taken as noise."""

    frame_len: int = 256
    overlap: float = 0.5
    window: str = "hamming"
    fft_len: int = 256
    noise_frames: int = 5
    alpha: float = 1e-5
    max_iters: int = 30
    floor: float = 0.0

    def __post_init__(self) -> None:
        if self.frame_len < 2:
            raise ValueError(f"frame length must be at least 2, got {self.frame_len}")
        if not 0.0 < self.overlap < 1.0:
            raise ValueError(f"overlap must lie strictly between 0 and 1, got {self.overlap}")
        if self.hop < 1:
            raise ValueError(f"overlap {self.overlap} leaves no hop")
        if self.fft_len < self.frame_len:
            raise ValueError(
                f"fft length {self.fft_len} shorter than frame length {self.frame_len}"
            )
        if self.noise_frames < 1:
            raise ValueError(f"need at least one noise frame, got {self.noise_frames}")
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be at least 1, got {self.max_iters}")
        if self.floor < 0:
            raise ValueError(f"floor must be nonnegative, got {self.floor}")
        FramePlan(self.frame_len, self.hop, window=self.window)

    @property
    def hop(self) -> int:
        return int(round(self.frame_len * (1.0 - self.overlap)))

    def plan(self) -> FramePlan:
        return FramePlan(self.frame_len, self.hop, window=self.window)


def bss(signal: np.ndarray, config: BaselineConfig | None = None) -> np.ndarray:
    """One ordinary-FFT spectral-subtraction pass.

    The noise magnitude profile is the mean over the leading noise_frames
    frames; phases are kept and the signal is rebuilt at input length.
    """
    config = config or BaselineConfig()
    x = np.asarray(signal, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("signal must be one-dimensional")
    if x.size < config.frame_len:
        raise ValueError(f"signal ({x.size} samples) shorter than one frame ({config.frame_len})")
    plan = config.plan()
    frames = segment(x, plan)
    if config.noise_frames > frames.shape[0]:
        raise ValueError(
            f"noise region wants {config.noise_frames} frames but only {frames.shape[0]} exist"
        )
    spectra = np.fft.rfft(frames, n=config.fft_len, axis=1, norm="ortho")
    mags = np.abs(spectra)
    phases = np.angle(spectra)
    profile = mags[: config.noise_frames].mean(axis=0)
    kept = np.maximum(mags - profile, config.floor)
    rebuilt = np.fft.irfft(kept * np.exp(1j * phases), n=config.fft_len, axis=1, norm="ortho")
    return overlap_add(rebuilt[:, : config.frame_len], plan, x.size)


def ibss(signal: np.ndarray, config: BaselineConfig | None = None) -> tuple[np.ndarray, int]:
    """Iterated ordinary-FFT subtraction with the same stop rule as igss.

    Returns the final signal and the number of passes run.
    """
    config = config or BaselineConfig()
    plan = config.plan()

    def level(s: np.ndarray) -> float:
        span = _region_sample_span(config.noise_frames, s.size, plan)
        return float(np.mean(np.abs(s[span])))

    return _iterate(
        signal, config.alpha, config.max_iters, level, lambda s: bss(s, config)
    )
