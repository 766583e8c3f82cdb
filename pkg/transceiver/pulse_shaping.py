"""
Root-raised-cosine pulse shaping and block FIR filtering.

Filtering runs block by block with overlap-save: each block of N_v new
samples is prefixed with the last ``len(taps) - 1`` input samples carried
over in scalar form. Block modes convolve the CBFP-encoded segment with the
CBFP-encoded taps, IEEE754 runs the scalar reference convolution.
"""

import logging
import math

import numpy as np

from numerics.block_alu import OpCostCounters, block_conv, scalar_conv
from numerics.cbfp_codec import decode, encode
from numerics.choices import Encoding
from numerics.exceptions import InvalidFilterOrder, InvalidRolloff
from numerics.ieee_fields import truncate

logger = logging.getLogger(__name__)


def rrc_taps(rolloff, order, upsample):
    """
    Unit-energy root-raised-cosine impulse response of ``order + 1`` taps,
    sampled at ``upsample`` samples per symbol.
    """
    if not 0 < rolloff < 1:
        raise InvalidRolloff(f"roll-off {rolloff} outside (0, 1)")
    if order < 2 or order % 2:
        raise InvalidFilterOrder(f"filter order {order} is not even and positive")

    t = (np.arange(order + 1) - order / 2) / upsample
    a = rolloff
    taps = np.empty(t.size)

    centre = np.isclose(t, 0.0)
    edge = np.isclose(np.abs(t), 1 / (4 * a))
    regular = ~(centre | edge)

    tr = t[regular]
    taps[regular] = (
        np.sin(np.pi * tr * (1 - a)) + 4 * a * tr * np.cos(np.pi * tr * (1 + a))
    ) / (np.pi * tr * (1 - (4 * a * tr) ** 2))
    taps[centre] = 1 - a + 4 * a / np.pi
    taps[edge] = (a / math.sqrt(2)) * (
        (1 + 2 / np.pi) * math.sin(np.pi / (4 * a)) + (1 - 2 / np.pi) * math.cos(np.pi / (4 * a))
    )
    return taps / np.sqrt(np.sum(taps**2))


def cascade_isi_db(taps, upsample):
    """Largest symbol-spaced sidelobe of the tx/rx cascade, in dB relative to its peak."""
    cascade = np.convolve(taps, taps)
    centre = cascade.size // 2
    lags = np.concatenate(
        [cascade[centre - upsample :: -upsample], cascade[centre + upsample :: upsample]]
    )
    return float(20 * np.log10(np.abs(lags).max() / np.abs(cascade[centre])))


def _convolve_segment(segment, taps, fmt, mode, counters):
    step = OpCostCounters()
    if mode == Encoding.IEEE754:
        out = scalar_conv(taps, segment, fmt, step)
    else:
        out = decode(block_conv(encode(taps, fmt, mode), encode(segment, fmt, mode), step))
    counters += step
    return out


def block_fir(samples, taps, fmt, mode, block_size, counters=None):
    """
    Full linear convolution of ``samples`` with ``taps`` (length
    ``len(samples) + len(taps) - 1``) computed in ``block_size`` blocks.
    """
    counters = OpCostCounters() if counters is None else counters
    samples = truncate(np.asarray(samples, dtype=np.complex128), fmt)
    taps = truncate(np.asarray(taps, dtype=np.complex128), fmt)
    history = taps.size - 1
    n_out = samples.size + history

    padded = np.concatenate([np.zeros(history), samples, np.zeros(history)])
    pieces = []
    for start in range(0, n_out, block_size):
        segment = padded[start : start + history + block_size]
        filtered = _convolve_segment(segment, taps, fmt, mode, counters)
        pieces.append(filtered[history : segment.size])

    logger.debug(f"Filtered {samples.size} samples with {taps.size} taps in {len(pieces)} blocks")
    return np.concatenate(pieces)[:n_out]
