"""
Bit-exact decomposition of IEEE-754 binary16/32/64 scalars into
sign / biased exponent / mantissa fields and back.

Only zero and normal numbers are accepted. NaN, infinity and denormals have
no block encoding and are rejected with ``UnsupportedValue``.
"""

import logging
from dataclasses import dataclass

import numpy as np

from numerics.exceptions import UnsupportedValue

logger = logging.getLogger(__name__)

# wordlength -> (exponent width, mantissa width)
_LAYOUTS = {16: (5, 10), 32: (8, 23), 64: (11, 52)}


@dataclass(frozen=True)
class FloatFormat:
    name: str
    wordlength: int
    exponent_width: int
    mantissa_width: int

    def __post_init__(self):
        layout = _LAYOUTS.get(self.wordlength)
        if layout != (self.exponent_width, self.mantissa_width):
            raise ValueError(
                f"Unsupported layout ({self.wordlength}, {self.exponent_width}, "
                f"{self.mantissa_width})"
            )

    def __str__(self):
        return self.name

    @property
    def bias(self):
        return (1 << (self.exponent_width - 1)) - 1

    @property
    def max_exponent(self):
        """Largest biased exponent of a normal number."""
        return (1 << self.exponent_width) - 2

    @property
    def dtype(self):
        return np.dtype(f"float{self.wordlength}")

    @property
    def uint_dtype(self):
        return np.dtype(f"uint{self.wordlength}")

    @property
    def tiny(self):
        return float(np.finfo(self.dtype).tiny)

    @property
    def max_value(self):
        return float(np.finfo(self.dtype).max)

    @property
    def tag(self):
        return FORMAT_TAGS[self.name]

    @classmethod
    def by_name(cls, name):
        try:
            return FORMATS[name]
        except KeyError:
            raise ValueError(
                f"{name} is not a known format, use one of {', '.join(FORMATS)}"
            ) from None


HALF = FloatFormat("half", 16, 5, 10)
SINGLE = FloatFormat("single", 32, 8, 23)
DOUBLE = FloatFormat("double", 64, 11, 52)

FORMATS = {fmt.name: fmt for fmt in (HALF, SINGLE, DOUBLE)}
FORMAT_TAGS = {"half": 0, "single": 1, "double": 2}


@dataclass(frozen=True)
class ScalarFields:
    sign: int
    exponent: int
    mantissa: int
    format: FloatFormat

    def __post_init__(self):
        fmt = self.format
        if self.sign not in (0, 1):
            raise ValueError(f"sign must be a single bit, got {self.sign}")
        if not 0 <= self.exponent <= fmt.max_exponent:
            raise ValueError(f"exponent {self.exponent} outside the normal range")
        if not 0 <= self.mantissa < (1 << fmt.mantissa_width):
            raise ValueError(f"mantissa {self.mantissa} wider than {fmt.mantissa_width} bits")
        if self.exponent == 0 and (self.mantissa or self.sign):
            raise ValueError("only the all-zero record may carry a zero exponent")

    @property
    def is_zero(self):
        return self.exponent == 0


def is_normal_or_zero(values, fmt):
    """Mask of entries that are exactly zero or normal numbers of ``fmt``."""
    values = np.asarray(values)
    with np.errstate(over="ignore", invalid="ignore"):
        cast = values.astype(fmt.dtype)
        magnitude = np.abs(cast)
        ok = np.isfinite(cast) & ((magnitude >= fmt.tiny) | (cast == 0))
        # a non-zero input that rounds to zero in fmt underflowed
        ok &= ~((values != 0) & (cast == 0))
    return ok


def _cast(values, fmt):
    values = np.asarray(values)
    if np.iscomplexobj(values):
        raise TypeError("field decomposition works on real values only")

    ok = is_normal_or_zero(values, fmt)
    if not ok.all():
        bad = np.asarray(values)[~ok]
        raise UnsupportedValue(
            f"{bad.size} value(s) are not zero or normal in {fmt.name}, "
            f"first offender {bad.flat[0]!r}"
        )
    with np.errstate(over="ignore"):
        return values.astype(fmt.dtype, order="C")


def split_array(values, fmt):
    """Vectorized ``split``: returns (sign, exponent, mantissa) int64 arrays."""
    word = fmt.uint_dtype.type
    bits = _cast(values, fmt).view(fmt.uint_dtype)

    sign = (bits >> word(fmt.wordlength - 1)).astype(np.int64)
    exponent = (
        (bits >> word(fmt.mantissa_width)) & word((1 << fmt.exponent_width) - 1)
    ).astype(np.int64)
    mantissa = (bits & word((1 << fmt.mantissa_width) - 1)).astype(np.int64)

    # -0.0 collapses onto the all-zero record
    sign = np.where(exponent == 0, 0, sign)
    return sign, exponent, mantissa


def assemble_array(sign, exponent, mantissa, fmt):
    """Vectorized ``assemble``: returns values in ``fmt``'s numpy dtype."""
    word = fmt.uint_dtype.type
    bits = (
        (np.asarray(sign).astype(fmt.uint_dtype) << word(fmt.wordlength - 1))
        | (np.asarray(exponent).astype(fmt.uint_dtype) << word(fmt.mantissa_width))
        | np.asarray(mantissa).astype(fmt.uint_dtype)
    )
    return np.asarray(bits, order="C").view(fmt.dtype)


def split(x, fmt):
    sign, exponent, mantissa = split_array(np.float64(x), fmt)
    return ScalarFields(
        sign=int(sign), exponent=int(exponent), mantissa=int(mantissa), format=fmt
    )


def assemble(fields):
    value = assemble_array(fields.sign, fields.exponent, fields.mantissa, fields.format)
    return float(value)


def _truncate_real(values, fmt):
    x = np.array(values, dtype=np.float64)
    if not np.isfinite(x).all():
        raise UnsupportedValue(f"cannot truncate non-finite values into {fmt.name}")

    drop = 52 - fmt.mantissa_width
    if drop:
        bits = x.view(np.uint64)
        bits &= ~np.uint64((1 << drop) - 1)

    x[np.abs(x) < fmt.tiny] = 0.0
    if (np.abs(x) > fmt.max_value).any():
        raise UnsupportedValue(f"value exceeds the largest {fmt.name} number")
    return x


def truncate(values, fmt):
    """
    Round 64-bit values toward zero into ``fmt``'s precision.

    Results below the smallest normal of ``fmt`` flush to zero. Returned as
    float64 / complex128 so callers keep computing at the widest width.
    """
    values = np.asarray(values)
    if not np.iscomplexobj(values):
        return _truncate_real(values, fmt)

    out = np.empty(values.shape, dtype=np.complex128)
    out.real = _truncate_real(values.real, fmt)
    out.imag = _truncate_real(values.imag, fmt)
    return out
