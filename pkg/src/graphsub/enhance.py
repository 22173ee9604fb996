"""Spectral subtraction on graph spectra: single pass and iterated variants.

The single pass (gss) segments the signal into half-overlapping rectangular
frames, transforms each frame under the circulant basis of the order-k
combined shift, subtracts an average noise magnitude profile from the lower
half of each spectrum, and resynthesizes with saved phases. The iterated
variant (igss) repeats that pass, re-estimating the profile from the current
signal, until the time-domain level of the designated noise region falls
below a threshold or an iteration cap is hit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .framing import FramePlan, overlap_add, segment
from .gft import GftBasis, basis_circulant, gft_block, igft_block
from .operators import GraphSignalFrame

__all__ = [
    "EnhancementConfig",
    "NoiseProfile",
    "estimate_noise_profile",
    "spectral_subtract",
    "noise_level",
    "gss",
    "igss",
]

NoiseRegion = int | tuple[int, int]


@dataclass(frozen=True)
class EnhancementConfig:
    """Knobs for gss/igss.

    noise_region designates the non-speech stretch used for profile
    estimation and level tracking: an int means that many leading frames, a
    (start, stop) pair is a sample range. There is no activity detector; the
    caller states where the noise lives.
    """

    k: int = 3
    frame_len: int = 256
    overlap: float = 0.5
    alpha: float = 1e-5
    max_iters: int = 30
    noise_region: NoiseRegion = 5
    floor: float = 0.0

    def __post_init__(self) -> None:
        if self.frame_len < 2 or self.frame_len % 2 != 0:
            raise ValueError(f"frame length must be even and >= 2, got {self.frame_len}")
        if not 1 <= self.k <= self.frame_len:
            raise ValueError(f"k must satisfy 1 <= k <= frame_len, got k={self.k}")
        if not 0.0 < self.overlap < 1.0:
            raise ValueError(f"overlap must lie strictly between 0 and 1, got {self.overlap}")
        if self.hop < 1:
            raise ValueError(f"overlap {self.overlap} leaves no hop")
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be at least 1, got {self.max_iters}")
        if self.floor < 0:
            raise ValueError(f"floor must be nonnegative, got {self.floor}")
        region = self.noise_region
        if isinstance(region, tuple):
            if len(region) != 2 or not 0 <= region[0] < region[1]:
                raise ValueError(f"noise region range must be 0 <= start < stop, got {region}")
        elif isinstance(region, (int, np.integer)):
            if region < 1:
                raise ValueError(f"noise region needs at least one frame, got {region}")
        else:
            raise ValueError("noise region must be a frame count or a (start, stop) pair")

    @property
    def hop(self) -> int:
        return int(round(self.frame_len * (1.0 - self.overlap)))

    def plan(self) -> FramePlan:
        return FramePlan(self.frame_len, self.hop, window="rectangular")


@dataclass(frozen=True)
class NoiseProfile:
    """Average half-spectrum magnitudes over the frames of a noise region."""

    magnitudes: np.ndarray
    source_frames: int

    def __post_init__(self) -> None:
        mags = np.array(self.magnitudes, dtype=np.float64)
        if mags.ndim != 1:
            raise ValueError("profile magnitudes must be a vector")
        if np.any(mags < 0):
            raise ValueError("profile magnitudes must be nonnegative")
        if self.source_frames < 1:
            raise ValueError("profile needs at least one source frame")
        mags.setflags(write=False)
        object.__setattr__(self, "magnitudes", mags)


def _region_frame_indices(region: NoiseRegion, n_frames: int, plan: FramePlan) -> np.ndarray:
    """Frame indices covered by a noise region designation."""
    if isinstance(region, tuple):
        start, stop = region
        first = np.arange(n_frames) * plan.hop
        inside = (first >= start) & (first + plan.frame_len <= stop)
        indices = np.nonzero(inside)[0]
        if indices.size == 0:
            raise ValueError(f"no complete frame fits inside the noise region {region}")
        return indices
    if region > n_frames:
        raise ValueError(f"noise region wants {region} frames but only {n_frames} exist")
    return np.arange(region)


def _region_sample_span(region: NoiseRegion, n_samples: int, plan: FramePlan) -> slice:
    """Sample range covered by a noise region designation."""
    if isinstance(region, tuple):
        start, stop = max(region[0], 0), min(region[1], n_samples)
    else:
        start, stop = 0, min((region - 1) * plan.hop + plan.frame_len, n_samples)
    if stop <= start:
        raise ValueError(f"noise region {region} covers no samples of a length-{n_samples} signal")
    return slice(start, stop)


def estimate_noise_profile(
    frames: list[GraphSignalFrame] | tuple[GraphSignalFrame, ...],
    basis: GftBasis,
    region,
) -> NoiseProfile:
    """Mean magnitude of bins 0 .. n/2 over the frames selected by region.

    region is an iterable of frame indices; duplicates collapse.
    """
    indices = sorted({int(i) for i in region})
    if not indices:
        raise ValueError("noise region selects no frames")
    if indices[0] < 0 or indices[-1] >= len(frames):
        raise ValueError(f"frame indices {indices} out of range for {len(frames)} frames")
    block = np.stack([frames[i].values for i in indices])
    spectra = gft_block(basis, block)
    half = basis.n // 2 + 1
    return NoiseProfile(np.abs(spectra[:, :half]).mean(axis=0), len(indices))


def spectral_subtract(
    noisy_mags: np.ndarray, profile: NoiseProfile, floor: float = 0.0
) -> np.ndarray:
    """max(noisy - profile, floor), elementwise over half-spectrum magnitudes.

    Accepts a single magnitude vector or a stack of them as rows.
    """
    if floor < 0:
        raise ValueError(f"floor must be nonnegative, got {floor}")
    noisy = np.asarray(noisy_mags, dtype=np.float64)
    if noisy.shape[-1] != profile.magnitudes.shape[0]:
        raise ValueError(
            f"magnitude length {noisy.shape[-1]} does not match profile "
            f"length {profile.magnitudes.shape[0]}"
        )
    return np.maximum(noisy - profile.magnitudes, floor)


def noise_level(signal: np.ndarray, config: EnhancementConfig) -> float:
    """Mean absolute amplitude over the configured noise region."""
    x = np.asarray(signal, dtype=np.float64)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("signal must be a non-empty vector")
    span = _region_sample_span(config.noise_region, x.size, config.plan())
    return float(np.mean(np.abs(x[span])))


def gss(
    signal: np.ndarray,
    config: EnhancementConfig | None = None,
    *,
    basis: GftBasis | None = None,
) -> np.ndarray:
    """One spectral-subtraction pass over the whole signal.

    Estimates the noise profile from the configured region of this same
    signal, subtracts it from every frame's half-spectrum magnitudes with the
    configured floor, and reconstructs using the saved phases. Output length
    equals input length. A prebuilt basis may be passed to amortize
    construction across calls; it must match (frame_len, k).
    """
    config = config or EnhancementConfig()
    x = np.asarray(signal, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("signal must be one-dimensional")
    if x.size < config.frame_len:
        raise ValueError(f"signal ({x.size} samples) shorter than one frame ({config.frame_len})")
    if basis is None:
        basis = basis_circulant(config.frame_len, config.k)
    elif (basis.n, basis.k) != (config.frame_len, config.k):
        raise ValueError(
            f"basis (n={basis.n}, k={basis.k}) does not match config "
            f"(frame_len={config.frame_len}, k={config.k})"
        )
    plan = config.plan()
    frames = segment(x, plan)
    region = _region_frame_indices(config.noise_region, frames.shape[0], plan)
    n = config.frame_len
    if basis.kind == "circulant" and basis.fast:
        # Half-complex route: the circulant coefficients are the conjugates of
        # the ortho-normalized FFT bins, so magnitudes and the real-ratio
        # rescaling can run on bins 0 .. n/2 alone and phases ride along
        # untouched inside the complex values. Same arithmetic as the generic
        # route below, minus the trigonometry.
        spectra = np.fft.rfft(frames, axis=1, norm="ortho")
        mags = np.abs(spectra)
        profile = NoiseProfile(mags[region].mean(axis=0), region.size)
        kept = spectral_subtract(mags, profile, config.floor)
        ratio = np.divide(kept, mags, out=np.zeros_like(kept), where=mags > 0)
        cleaned = spectra * ratio
        if config.floor > 0:
            # A bin of exactly zero magnitude carries phase zero, so the
            # floor enters as a real value there.
            cleaned[mags == 0] = config.floor
        rebuilt = np.fft.irfft(cleaned, n=n, axis=1, norm="ortho")
    else:
        spectra = gft_block(basis, frames)
        half = n // 2 + 1
        mags = np.abs(spectra[:, :half])
        phases = np.angle(spectra)
        profile = NoiseProfile(mags[region].mean(axis=0), region.size)
        kept = spectral_subtract(mags, profile, config.floor)
        bins = np.arange(n)
        fold = np.minimum(bins, n - bins)
        rebuilt = igft_block(basis, kept[:, fold] * np.exp(1j * phases))
    return overlap_add(rebuilt, plan, x.size)


def _iterate(signal, alpha, max_iters, level, one_pass) -> tuple[np.ndarray, int]:
    """Shared loop for the iterated subtractors: pass until quiet or capped."""
    out = np.asarray(signal, dtype=np.float64)
    iterations = 0
    while iterations < max_iters and level(out) >= alpha:
        out = one_pass(out)
        iterations += 1
    if iterations == 0:
        out = out.copy()  # never alias the caller's array
    return out, iterations


def igss(
    signal: np.ndarray,
    config: EnhancementConfig | None = None,
    *,
    basis: GftBasis | None = None,
) -> tuple[np.ndarray, int]:
    """Iterated spectral subtraction.

    Repeats gss while the noise region's mean absolute amplitude stays at or
    above config.alpha, re-estimating the profile from the current signal
    each time, for at most config.max_iters passes. Returns the final signal
    and the number of passes actually run (possibly zero).
    """
    config = config or EnhancementConfig()
    if basis is None:
        basis = basis_circulant(config.frame_len, config.k)
    return _iterate(
        signal,
        config.alpha,
        config.max_iters,
        lambda s: noise_level(s, config),
        lambda s: gss(s, config, basis=basis),
    )
