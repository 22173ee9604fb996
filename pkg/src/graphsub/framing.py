"""Frame segmentation and overlap-add resynthesis."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["FramePlan", "segment", "overlap_add"]

_WINDOWS = ("rectangular", "hamming")


@dataclass(frozen=True)
class FramePlan:
    """Segmentation layout: frame length, hop, and analysis window."""

    frame_len: int = 256
    hop: int | None = None
    window: str = "rectangular"

    def __post_init__(self) -> None:
        if self.hop is None:
            object.__setattr__(self, "hop", self.frame_len // 2)
        if self.frame_len < 1:
            raise ValueError(f"frame length must be positive, got {self.frame_len}")
        if not 0 < self.hop <= self.frame_len:
            raise ValueError(f"hop must satisfy 0 < hop <= frame_len, got hop={self.hop}")
        if self.window not in _WINDOWS:
            raise ValueError(f"window must be one of {_WINDOWS}, got {self.window!r}")

    def window_values(self) -> np.ndarray:
        if self.window == "hamming":
            return np.hamming(self.frame_len)
        return np.ones(self.frame_len)


def segment(signal: np.ndarray, plan: FramePlan) -> np.ndarray:
    """Split a signal into windowed frames, rows of the returned array.

    Frame m covers samples [m*hop, m*hop + frame_len); the tail is zero
    padded so ceil(len/hop) frames cover every input sample.
    """
    x = np.asarray(signal, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("signal must be one-dimensional")
    if x.size == 0:
        raise ValueError("cannot segment an empty signal")
    count = -(-x.size // plan.hop)
    padded = np.zeros((count - 1) * plan.hop + plan.frame_len)
    padded[: x.size] = x
    frames = np.lib.stride_tricks.sliding_window_view(padded, plan.frame_len)[:: plan.hop]
    # the strided view is read-only (and already contiguous when hop == frame_len)
    frames = np.array(frames)
    if plan.window != "rectangular":
        frames *= plan.window_values()
    return frames


def overlap_add(frames: np.ndarray, plan: FramePlan, out_len: int) -> np.ndarray:
    """Resynthesize a signal of length out_len from (possibly modified) frames.

    Each frame is added back at offset m*hop, then every sample is divided by
    the window values accumulated there, so unmodified frames reconstruct the
    input exactly for any window that stays positive.
    """
    frames = np.asarray(frames, dtype=np.float64)
    if frames.ndim != 2 or frames.shape[1] != plan.frame_len:
        raise ValueError(f"frames must be rows of length {plan.frame_len}")
    if out_len < 0:
        raise ValueError("output length must be nonnegative")
    count = frames.shape[0]
    total = (count - 1) * plan.hop + plan.frame_len if count else 0
    acc = np.zeros(total)
    wsum = np.zeros(total)
    w = plan.window_values()
    if count and plan.frame_len % plan.hop == 0:
        # Frames whose indices agree mod frame_len/hop never overlap, so each
        # residue class folds in as one contiguous strip.
        stride = plan.frame_len // plan.hop
        for phase in range(min(stride, count)):
            rows = frames[phase::stride]
            start = phase * plan.hop
            acc[start : start + rows.size] += rows.ravel()
            wsum[start : start + rows.size] += np.tile(w, rows.shape[0])
    else:
        for m in range(count):
            start = m * plan.hop
            acc[start : start + plan.frame_len] += frames[m]
            wsum[start : start + plan.frame_len] += w
    out = np.zeros(total)
    covered = wsum > 0
    out[covered] = acc[covered] / wsum[covered]
    if out_len <= total:
        return out[:out_len]
    return np.concatenate([out, np.zeros(out_len - total)])
