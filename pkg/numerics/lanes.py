"""
Integer helpers shared by the codec and the block ALU.

A lane is one real significand held as a signed integer. Lanes of the
half and single formats fit int64 even at accumulator width, double lanes
are Python integers carried in object arrays.
"""

import numpy as np

# int64 shifts at or beyond this amount are undefined, they are clamped to zero
_INT64_SHIFT_LIMIT = 63


def lane_dtype(fmt, guard_bits):
    # sign bit + accumulator magnitude must fit a signed 64-bit word
    if 2 * fmt.mantissa_width + guard_bits + 1 < _INT64_SHIFT_LIMIT:
        return np.dtype(np.int64)
    return np.dtype(object)


def as_lanes(values, dtype):
    values = np.asarray(values)
    if dtype == object:
        return values.astype(np.int64).astype(object)
    return values.astype(np.int64)


def bit_length(values):
    """Per-entry ``int.bit_length`` of the magnitude."""
    values = np.asarray(values)
    if values.dtype == object:
        lengths = np.frompyfunc(lambda v: abs(int(v)).bit_length(), 1, 1)(values)
        return np.asarray(lengths).astype(np.int64)

    magnitude = np.abs(values.astype(np.int64))
    _, exponent = np.frexp(magnitude.astype(np.float64))
    exponent = exponent.astype(np.int64)
    # the float conversion may round up into the next power of two
    carried = (magnitude >> np.maximum(exponent - 1, 0)) == 0
    return np.where(magnitude == 0, 0, exponent - carried)


def shift_toward_zero(values, shift):
    """
    Scale signed lanes by ``2**-shift``.

    Positive shifts move right and truncate the magnitude (round toward
    zero), negative shifts move left exactly.
    """
    values = np.asarray(values)
    shift = np.broadcast_to(np.asarray(shift, dtype=np.int64), values.shape)
    negative = values < 0
    magnitude = np.abs(values)

    if values.dtype == object:
        right = np.maximum(shift, 0).astype(object)
        left = np.maximum(-shift, 0).astype(object)
        moved = (magnitude >> right) << left
    else:
        right = np.minimum(np.maximum(shift, 0), _INT64_SHIFT_LIMIT)
        left = np.maximum(-shift, 0)
        moved = (magnitude >> right) << left
        moved = np.where(shift >= _INT64_SHIFT_LIMIT, 0, moved)

    return np.where(negative, -moved, moved)
