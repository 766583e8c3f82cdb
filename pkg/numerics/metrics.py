"""
Signal-quality measurements and the inputs-ratio operand generator.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from django.conf import settings

from numerics.exceptions import AllZero, LengthMismatch, RatioOutOfRange, ZeroReference
from numerics.ieee_fields import truncate

logger = logging.getLogger(__name__)

DB_PER_BINADE = 20 * math.log10(2)


@dataclass(frozen=True)
class EvmResult:
    evm_percent: float
    n_samples: int

    def __float__(self):
        return self.evm_percent


def evm_percent(reference, test):
    """RMS error vector magnitude of ``test`` against ``reference``, in percent."""
    reference = np.asarray(reference, dtype=np.complex128).ravel()
    test = np.asarray(test, dtype=np.complex128).ravel()
    if reference.size != test.size or reference.size == 0:
        raise LengthMismatch(f"reference has {reference.size} samples, test {test.size}")

    norm = np.linalg.norm(reference)
    if norm == 0:
        raise ZeroReference("reference signal is all zero")
    return EvmResult(
        evm_percent=float(np.linalg.norm(reference - test) / norm * 100),
        n_samples=reference.size,
    )


def dynamic_range_db(values):
    magnitude = np.abs(np.asarray(values)).ravel()
    magnitude = magnitude[magnitude != 0]
    if magnitude.size == 0:
        raise AllZero("dynamic range of an all-zero sequence")
    return float(20 * np.log10(magnitude.max() / magnitude.min()))


def snr_db(signal, noisy):
    signal = np.asarray(signal)
    noise = np.asarray(noisy) - signal
    return float(10 * np.log10(np.mean(np.abs(signal) ** 2) / np.mean(np.abs(noise) ** 2)))


def derive_seed(seed, index):
    """Independent 64-bit seed for sweep point ``index`` of a run seeded with ``seed``."""
    high, low = np.random.SeedSequence([seed, index]).generate_state(2, dtype=np.uint32)
    return (int(high) << 32) | int(low)


def ratio_exponent_span(ratio_db):
    return round(ratio_db / DB_PER_BINADE)


def _ratio_block(rng, n_samples, fmt, top, span):
    n_components = 2 * n_samples
    exponent = rng.integers(top - span, top + 1, size=n_components)
    top_slot, bottom_slot = rng.choice(n_components, size=2, replace=False)
    exponent[top_slot], exponent[bottom_slot] = top, top - span

    significand = 1.0 + rng.random(n_components)
    sign = rng.choice([-1.0, 1.0], size=n_components)
    components = truncate(sign * np.ldexp(significand, exponent - fmt.bias), fmt)
    return components[0::2] + 1j * components[1::2]


def generate_ratio_blocks(ratio_db, n_samples, fmt, seed):
    """
    Two random operand blocks whose within-block dynamic range is ``ratio_db``.

    Biased exponents spread uniformly over [e_top - span, e_top] with both
    ends occupied, e_top the configured anchor clipped to the format.
    Significands are uniform in [1, 2), so the realized range lies within
    one binade of ``span`` binades.
    """
    if n_samples < 2:
        raise ValueError(f"a ratio block needs at least two samples, got {n_samples}")
    if ratio_db < 0:
        raise RatioOutOfRange(f"inputs ratio must be non-negative, got {ratio_db}")

    top = min(settings.CBFP_RATIO_EXPONENT_TOP, fmt.max_exponent)
    span = ratio_exponent_span(ratio_db)
    if top - span < 1:
        raise RatioOutOfRange(
            f"{ratio_db} dB needs {span} binades below exponent {top}, {fmt.name} has {top - 1}"
        )

    rng = np.random.default_rng(seed)
    blocks = tuple(_ratio_block(rng, n_samples, fmt, top, span) for _ in range(2))
    logger.debug(f"Generated {ratio_db} dB ratio blocks (span {span}) in {fmt.name}")
    return blocks
