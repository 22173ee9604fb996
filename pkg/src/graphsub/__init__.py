"""Speech enhancement by spectral subtraction on cyclic graph shift operators."""

from .baseline import BaselineConfig, bss, ibss
from .enhance import (
    EnhancementConfig,
    NoiseProfile,
    estimate_noise_profile,
    gss,
    igss,
    noise_level,
    spectral_subtract,
)
from .framing import FramePlan, overlap_add, segment
from .gft import (
    GftBasis,
    GraphSpectrum,
    HalfSpectrum,
    basis_circulant,
    basis_dense,
    expand_half,
    gft,
    gft_block,
    half_spectrum,
    igft,
    igft_block,
)
from .operators import (
    CombinedShiftOperator,
    CyclicShiftOperator,
    GraphSignalFrame,
    apply_shift,
    combined_shift_matrix,
    cyclic_shift_matrix,
    materialize,
)
from .signals import (
    SILENT_PREFIX,
    SnrReport,
    gen_pink_noise,
    gen_tone_speech,
    gen_white_noise,
    mix_at_snr,
    snr,
)
from .wavio import AudioBuffer, read_wav, write_wav

__version__ = "0.1.0"

__all__ = [
    "AudioBuffer",
    "BaselineConfig",
    "CombinedShiftOperator",
    "CyclicShiftOperator",
    "EnhancementConfig",
    "FramePlan",
    "GftBasis",
    "GraphSignalFrame",
    "GraphSpectrum",
    "HalfSpectrum",
    "NoiseProfile",
    "SILENT_PREFIX",
    "SnrReport",
    "apply_shift",
    "basis_circulant",
    "basis_dense",
    "bss",
    "combined_shift_matrix",
    "cyclic_shift_matrix",
    "estimate_noise_profile",
    "expand_half",
    "gen_pink_noise",
    "gen_tone_speech",
    "gen_white_noise",
    "gft",
    "gft_block",
    "gss",
    "half_spectrum",
    "ibss",
    "igft",
    "igft_block",
    "igss",
    "materialize",
    "mix_at_snr",
    "noise_level",
    "overlap_add",
    "read_wav",
    "segment",
    "snr",
    "spectral_subtract",
    "write_wav",
    "__version__",
]
