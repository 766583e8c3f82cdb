"""
Square QAM symbol mapping with per-axis Gray coding, and the sample-rate
converters around the pulse-shaping filters.
"""

import math

import numpy as np

from numerics.exceptions import BitCountNotMultipleOfJ, OffsetOutOfRange


def _axis(order):
    bits = int(math.log2(order))
    if order < 4 or 1 << bits != order or bits % 2:
        raise ValueError(f"{order} is not a square QAM constellation order")
    return bits // 2, 1 << (bits // 2)


def constellation_scale(order):
    """Factor bringing the mean symbol energy of the grid to 1."""
    _, levels = _axis(order)
    return 1 / math.sqrt(2 * (levels**2 - 1) / 3)


def _gray_to_index(gray, axis_bits):
    index = gray.copy()
    shift = 1
    while shift < axis_bits:
        index ^= index >> shift
        shift <<= 1
    return index


def _bits_to_int(bits):
    weights = 1 << np.arange(bits.shape[-1] - 1, -1, -1, dtype=np.int64)
    return (bits.astype(np.int64) * weights).sum(axis=-1)


def _int_to_bits(values, width):
    return ((values[..., None] >> np.arange(width - 1, -1, -1)) & 1).astype(np.uint8)


def map_symbols(bits, order=1024):
    axis_bits, levels = _axis(order)
    bits = np.asarray(bits, dtype=np.uint8).ravel()
    per_symbol = 2 * axis_bits
    if bits.size % per_symbol:
        raise BitCountNotMultipleOfJ(
            f"{bits.size} bits do not split into {per_symbol}-bit symbols"
        )

    words = bits.reshape(-1, 2, axis_bits)
    index = _gray_to_index(_bits_to_int(words), axis_bits)
    amplitude = (2 * index - (levels - 1)).astype(np.float64) * constellation_scale(order)
    return amplitude[:, 0] + 1j * amplitude[:, 1]


def demap_symbols(symbols, order=1024):
    """Nearest-point decisions, returned as the Gray-coded bit stream."""
    axis_bits, levels = _axis(order)
    symbols = np.asarray(symbols, dtype=np.complex128).ravel()
    axes = np.stack([symbols.real, symbols.imag], axis=-1) / constellation_scale(order)
    index = np.clip(np.rint((axes + (levels - 1)) / 2), 0, levels - 1).astype(np.int64)
    return _int_to_bits(index ^ (index >> 1), axis_bits).reshape(-1)


def upsample(samples, factor):
    if factor < 1:
        raise ValueError(f"upsampling factor must be positive, got {factor}")
    samples = np.asarray(samples)
    out = np.zeros(samples.size * factor, dtype=np.result_type(samples, np.complex128))
    out[::factor] = samples
    return out


def downsample(samples, factor, offset=0):
    if factor < 1:
        raise ValueError(f"downsampling factor must be positive, got {factor}")
    samples = np.asarray(samples)
    if not 0 <= offset < samples.size:
        raise OffsetOutOfRange(f"offset {offset} outside a {samples.size}-sample signal")
    return samples[offset::factor]
