"""
Complex block floating-point codec.

A block of N_v complex samples is stored as one common biased exponent E and,
per real component (re, im interleaved), a sign bit S, an explicit lead bit
L, a box-shift bit X (Exponent Box only) and a B_m-bit mantissa M::

    v = (-1)**S * (L.M)_2 * 2**(E - bias - B_m * X)

Common Exponent encoding right-shifts every component onto the grid of the
largest one. Exponent Box encoding first grants components that sit more than
B_m binades below the top an extra 2**-B_m scale, so they keep significand
bits Common would truncate away.
"""

import logging
from dataclasses import dataclass

import numpy as np

from numerics.choices import BLOCK_ENCODINGS, Encoding, Region
from numerics.exceptions import ExponentOverflow
from numerics.ieee_fields import split_array
from numerics.lanes import bit_length, shift_toward_zero

logger = logging.getLogger(__name__)

SIGN_BITS = 1
LEAD_BITS = 1
BOX_BITS = 1


def _frozen(values, dtype):
    array = np.array(values, dtype=dtype, copy=True).reshape(-1)
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class CbfpBlock:
    format: object
    mode: str
    common_exponent: int
    signs: np.ndarray
    leads: np.ndarray
    box_shifts: np.ndarray
    mantissas: np.ndarray

    def __post_init__(self):
        fmt = self.format
        if self.mode not in BLOCK_ENCODINGS:
            raise ValueError(f"{self.mode} is not a block encoding")
        object.__setattr__(self, "mode", Encoding(self.mode))
        object.__setattr__(self, "common_exponent", int(self.common_exponent))
        for name, dtype in (
            ("signs", np.uint8),
            ("leads", np.uint8),
            ("box_shifts", np.uint8),
            ("mantissas", np.int64),
        ):
            object.__setattr__(self, name, _frozen(getattr(self, name), dtype))

        size = self.signs.size
        if size == 0 or size % 2:
            raise ValueError(f"a block needs an even, non-zero component count, got {size}")
        if any(a.size != size for a in (self.leads, self.box_shifts, self.mantissas)):
            raise ValueError("component arrays differ in length")
        if not 0 <= self.common_exponent <= fmt.max_exponent:
            raise ExponentOverflow(
                f"common exponent {self.common_exponent} outside [0, {fmt.max_exponent}]"
            )
        if (self.signs > 1).any() or (self.leads > 1).any() or (self.box_shifts > 1).any():
            raise ValueError("sign, lead and box-shift fields are single bits")
        if ((self.mantissas < 0) | (self.mantissas >= (1 << fmt.mantissa_width))).any():
            raise ValueError(f"mantissas must fit {fmt.mantissa_width} bits")
        if self.mode == Encoding.COMMON and self.box_shifts.any():
            raise ValueError("Common Exponent blocks carry no box shifts")

    @classmethod
    def zeros(cls, fmt, n_samples, mode=Encoding.COMMON):
        empty = np.zeros(2 * n_samples, dtype=np.int64)
        return cls(fmt, mode, 0, empty, empty, empty, empty)

    @property
    def n_samples(self):
        return self.signs.size // 2

    def __len__(self):
        return self.n_samples

    def __eq__(self, other):
        if not isinstance(other, CbfpBlock):
            return NotImplemented
        return (
            self.format == other.format
            and self.mode == other.mode
            and self.common_exponent == other.common_exponent
            and np.array_equal(self.signs, other.signs)
            and np.array_equal(self.leads, other.leads)
            and np.array_equal(self.box_shifts, other.box_shifts)
            and np.array_equal(self.mantissas, other.mantissas)
        )

    __hash__ = None

    def __repr__(self):
        return (
            f"CbfpBlock(format={self.format.name}, mode={self.mode.value}, "
            f"n_samples={self.n_samples}, common_exponent={self.common_exponent})"
        )

    def significands(self):
        """Signed integer (L.M) per component, scaled by 2**B_m."""
        stored = (self.leads.astype(np.int64) << self.format.mantissa_width) | self.mantissas
        return np.where(self.signs == 1, -stored, stored)

    def lsb_exponents(self):
        """True exponent of each component's least significant stored bit."""
        fmt = self.format
        return (
            self.common_exponent
            - fmt.bias
            - fmt.mantissa_width
            - fmt.mantissa_width * self.box_shifts.astype(np.int64)
        )

    def ulp(self):
        return np.ldexp(1.0, self.lsb_exponents())


def _interleave(samples):
    samples = np.asarray(samples)
    if samples.shape[-1:] == (0,) or samples.ndim == 0:
        raise ValueError("a block needs at least one sample")
    components = np.stack([samples.real, samples.imag], axis=-1)
    return components.reshape(*samples.shape[:-1], -1).astype(np.float64)


def _pair(components):
    out = np.empty(components.shape[:-1] + (components.shape[-1] // 2,), dtype=np.complex128)
    out.real = components[..., 0::2]
    out.imag = components[..., 1::2]
    return out


def _encode_fields(samples, fmt, mode):
    """Fields of every block along the last axis of ``samples``."""
    sign, exponent, mantissa = split_array(_interleave(samples), fmt)
    width = fmt.mantissa_width

    live = exponent > 0
    # zero components do not take part in the maximization
    common = np.where(live, exponent, 0).max(axis=-1)
    top = common[..., None]

    if mode == Encoding.BOX:
        box = live & (exponent < top - width)
    else:
        box = np.zeros_like(live)

    shift = top - (exponent + width * box)
    significand = np.where(live, (1 << width) | mantissa, 0)
    # anything shifted past the lead bit is gone
    stored = significand >> np.minimum(shift, width + 1)

    lost = int((live & (stored == 0)).sum())
    if lost:
        logger.debug(f"{lost} component(s) lost every significand bit under {mode} encoding")

    return common, sign, stored >> width, box, stored & ((1 << width) - 1)


def encode(samples, fmt, mode):
    if mode not in BLOCK_ENCODINGS:
        raise ValueError(f"{mode} is not a block encoding")
    samples = np.asarray(samples)
    if samples.ndim != 1:
        raise ValueError("encode takes one block, use requantize for batches")
    common, sign, leads, box, mantissas = _encode_fields(samples, fmt, mode)
    return CbfpBlock(fmt, mode, int(common), sign, leads, box, mantissas)


def encode_common(samples, fmt):
    return encode(samples, fmt, Encoding.COMMON)


def encode_box(samples, fmt):
    return encode(samples, fmt, Encoding.BOX)


def encode_lanes(values, grids, fmt, mode):
    """
    Re-encode signed integer lanes into a block.

    Component i holds ``values[i] * 2**grids[i]``. A fresh common exponent is
    taken from the largest component, the box bits are chosen as in
    ``encode_box``, and every lane is shifted onto its stored grid,
    truncating toward zero.
    """
    values = np.asarray(values)
    grids = np.asarray(grids, dtype=np.int64)
    n_samples = values.size // 2

    live = values != 0
    if not live.any():
        return CbfpBlock.zeros(fmt, n_samples, mode)

    biased = bit_length(values) - 1 + grids + fmt.bias
    common = int(biased[live].max())
    if common > fmt.max_exponent:
        raise ExponentOverflow(
            f"result exponent {common} exceeds the {fmt.name} range ({fmt.max_exponent})"
        )
    if common < 1:
        logger.debug(f"result exponent {common} underflows {fmt.name}, block flushed to zero")
        return CbfpBlock.zeros(fmt, n_samples, mode)

    width = fmt.mantissa_width
    if mode == Encoding.BOX:
        box = live & (biased < common - width)
    else:
        box = np.zeros(values.shape, dtype=bool)

    target = common - fmt.bias - width - width * box.astype(np.int64)
    stored = np.abs(shift_toward_zero(values, target - grids)).astype(np.int64)
    return CbfpBlock(
        fmt,
        mode,
        common,
        signs=(values < 0) & live,
        leads=stored >> width,
        box_shifts=box,
        mantissas=stored & ((1 << width) - 1),
    )


def _decode_components(significands, lsb_exponents, fmt):
    values = np.ldexp(significands.astype(np.float64), lsb_exponents)
    # anything below the smallest normal of the format reads back as zero
    return np.where(np.abs(values) < fmt.tiny, 0.0, values)


def decode(block):
    """Complex samples of ``block``, every value exactly representable in its format."""
    return _pair(
        _decode_components(block.significands(), block.lsb_exponents(), block.format)
    )


def requantize(samples, fmt, mode):
    """
    Encode then decode every row of a 2-D array of blocks in one pass.

    Equivalent to ``decode(encode(row, fmt, mode))`` per row.
    """
    samples = np.atleast_2d(np.asarray(samples))
    if mode == Encoding.IEEE754:
        components = _interleave(samples)
        split_array(components, fmt)  # rejects what fmt cannot hold
        return _pair(components.astype(fmt.dtype).astype(np.float64))

    common, sign, leads, box, mantissas = _encode_fields(samples, fmt, mode)
    width = fmt.mantissa_width
    stored = (leads << width) | mantissas
    lsb = common[..., None] - fmt.bias - width - width * box.astype(np.int64)
    return _pair(_decode_components(np.where(sign == 1, -stored, stored), lsb, fmt))


def wordlength_bits(mode, n_samples, fmt):
    if n_samples < 1:
        raise ValueError(f"block size must be positive, got {n_samples}")

    if mode == Encoding.IEEE754:
        return 2 * n_samples * fmt.wordlength
    if mode == Encoding.COMMON:
        per_component = SIGN_BITS + LEAD_BITS + fmt.mantissa_width
    elif mode == Encoding.BOX:
        per_component = SIGN_BITS + LEAD_BITS + BOX_BITS + fmt.mantissa_width
    else:
        raise ValueError(f"unknown encoding {mode}")
    return 2 * n_samples * per_component + fmt.exponent_width


def max_exponent_difference(fmt):
    return fmt.mantissa_width


def _reach(fmt, mode):
    if mode == Encoding.COMMON:
        return fmt.mantissa_width
    if mode == Encoding.BOX:
        return 2 * fmt.mantissa_width
    raise ValueError(f"{mode} is not a block encoding")


def eer_classify(e_re, e_im, e_max, fmt, mode):
    if e_re > e_max or e_im > e_max:
        raise ValueError(f"exponents ({e_re}, {e_im}) exceed the block maximum {e_max}")
    reach = _reach(fmt, mode)
    if e_max - e_re <= reach and e_max - e_im <= reach:
        return Region.INSIDE
    return Region.OUTSIDE


def eer_area(fmt, mode, span=None):
    """Number of (re, im) exponent-gap lattice points in [0, span]**2 classified Inside."""
    span = 2 * fmt.mantissa_width if span is None else span
    gaps = np.arange(span + 1)
    inside_per_axis = int((gaps <= _reach(fmt, mode)).sum())
    return inside_per_axis**2


def exponent_pairs(samples, fmt):
    """Biased (real, imaginary) exponent of every sample, shape (N_v, 2)."""
    _, exponent, _ = split_array(_interleave(samples), fmt)
    return exponent.reshape(-1, 2)
