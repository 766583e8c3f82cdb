import logging
import math

import numpy as np

logger = logging.getLogger(__name__)


def awgn(samples, snr_db, seed, signal_power=None):
    """
    Add circularly-symmetric white Gaussian noise at ``snr_db``.

    The noise variance follows ``signal_power`` when given, the measured
    power of ``samples`` otherwise. An infinite SNR returns the input.
    """
    samples = np.asarray(samples, dtype=np.complex128)
    if samples.size == 0:
        raise ValueError("cannot add noise to an empty signal")
    if math.isinf(snr_db) and snr_db > 0:
        return samples.copy()

    power = np.mean(np.abs(samples) ** 2) if signal_power is None else signal_power
    sigma = math.sqrt(power / 10 ** (snr_db / 10) / 2)
    noise = np.random.default_rng(seed).standard_normal((2, samples.size))
    logger.debug(f"AWGN at {snr_db} dB, sigma {sigma:.3e}, seed {seed}")
    return samples + sigma * (noise[0] + 1j * noise[1])
