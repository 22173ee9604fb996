"""Shared fixtures. Thread pinning must happen before numpy is imported:
the performance checks compare single-threaded code paths, and BLAS reads
these variables once at load time.
"""

import os

for _var in (
    "OMP_NUM_THREADS",
    "OPENBLAS_NUM_THREADS",
    "MKL_NUM_THREADS",
    "NUMEXPR_NUM_THREADS",
    "VECLIB_MAXIMUM_THREADS",
):
    os.environ[_var] = "1"

import numpy as np  # noqa: E402
import pytest  # noqa: E402

from graphsub import gen_tone_speech, gen_white_noise, mix_at_snr  # noqa: E402

GOLDEN_SPEECH_SEED = 7
GOLDEN_NOISE_SEED = 17
GOLDEN_RATE = 16000


@pytest.fixture(scope="session")
def golden_speech():
    return gen_tone_speech(1.0, GOLDEN_RATE, seed=GOLDEN_SPEECH_SEED)


@pytest.fixture(scope="session")
def golden_noisy(golden_speech):
    """The regression clip: seeded 1 s tone speech plus white noise at 0 dB."""
    noise = gen_white_noise(golden_speech.size, seed=GOLDEN_NOISE_SEED)
    noisy, scale = mix_at_snr(golden_speech, noise, 0.0)
    assert np.isclose(scale, 0.18181624372124755, rtol=1e-6)
    return noisy
