"""
Block arithmetic on CbfpBlock operands with cost instrumentation.

Every operation decodes box shifts into per-component grids, combines the
integer significands in a WideAccumulator, then renormalizes the result
once (fresh common exponent, then re-boxing). Cost counters tally
what a SIMD block ALU would spend:

* mantissa scaling: one barrel shift of one live (non-zero) real
  significand: box decodes, product normalizations, alignments before an
  addition and post-normalizations of live results.
* exponent arithmetic: one add, subtract or compare on exponent fields.

The scalar_* functions are the IEEE-754 reference: 64-bit arithmetic
truncated to the operand format, with the per-component costs a scalar
floating-point unit would spend.
"""

import logging
from dataclasses import astuple, dataclass, fields

import numpy as np
from django.conf import settings

from numerics.cbfp_codec import decode, encode, encode_lanes
from numerics.choices import Encoding, Operation
from numerics.exceptions import BlockSizeMismatch, ExponentOverflow, FormatMismatch
from numerics.ieee_fields import FloatFormat, truncate
from numerics.lanes import as_lanes, bit_length, lane_dtype, shift_toward_zero
from numerics.metrics import derive_seed

logger = logging.getLogger(__name__)

COUNTER_CSV_HEADER = (
    "op",
    "mode",
    "n1",
    "n2",
    "mantissa_scalings",
    "exponent_ops",
    "complex_mults",
    "complex_adds",
)

# top exponent of a lane with no live term
_NO_TOP = np.iinfo(np.int64).min // 4


@dataclass
class OpCostCounters:
    mantissa_scalings: int = 0
    exponent_ops: int = 0
    complex_mults: int = 0
    complex_adds: int = 0

    def reset(self):
        for field in fields(self):
            setattr(self, field.name, 0)
        return self

    def __add__(self, other):
        if not isinstance(other, OpCostCounters):
            return NotImplemented
        return OpCostCounters(*(a + b for a, b in zip(astuple(self), astuple(other))))

    def __iadd__(self, other):
        if not isinstance(other, OpCostCounters):
            return NotImplemented
        for field in fields(self):
            setattr(self, field.name, getattr(self, field.name) + getattr(other, field.name))
        return self

    def maximum(self, other):
        return OpCostCounters(*(max(a, b) for a, b in zip(astuple(self), astuple(other))))

    def dominated_by(self, other):
        """True when no counter exceeds the matching counter of ``other``."""
        return all(a <= b for a, b in zip(astuple(self), astuple(other)))

    def csv_row(self, op, mode, n1, n2=None):
        return [str(op), str(mode), n1, n1 if n2 is None else n2, *astuple(self)]


@dataclass(frozen=True, eq=False)
class WideAccumulator:
    """
    Signed integer lanes ``values[i] * 2**exponents[i]`` ahead of renormalization.
    """

    values: np.ndarray
    exponents: np.ndarray
    format: FloatFormat
    guard_bits: int

    def __post_init__(self):
        live = self.values != 0
        width = 2 * self.format.mantissa_width + self.guard_bits
        if (bit_length(self.values)[live] > width).any():
            raise ExponentOverflow(f"accumulator magnitude exceeds {width} bits")
        limit = 1 << (self.format.exponent_width + 2)
        if (np.abs(self.exponents[live]) >= limit).any():
            raise ExponentOverflow(f"accumulator exponent outside ±{limit}")

    @property
    def signs(self):
        return (self.values < 0).astype(np.uint8)

    @property
    def magnitudes(self):
        return np.abs(self.values)

    def live_count(self):
        return int(np.count_nonzero(self.values != 0))

    def to_block(self, mode):
        return encode_lanes(self.values, self.exponents, self.format, mode)


def _fresh(counters):
    return OpCostCounters() if counters is None else counters.reset()


def _guard_bits(guard_bits):
    return settings.CBFP_GUARD_BITS if guard_bits is None else guard_bits


def _check_operands(a, b, same_size=True):
    if a.format != b.format:
        raise FormatMismatch(f"operands are {a.format.name} and {b.format.name}")
    if same_size and a.n_samples != b.n_samples:
        raise BlockSizeMismatch(f"operands hold {a.n_samples} and {b.n_samples} samples")
    return a.format


def _result_mode(a, b):
    if Encoding.BOX in (a.mode, b.mode):
        return Encoding.BOX
    return Encoding.COMMON


def _live(values):
    return int(np.count_nonzero(np.asarray(values) != 0))


def _box_decodes(block):
    return _live(block.significands()) if block.mode == Encoding.BOX else 0


def _tops(values, grids):
    return np.where(values != 0, bit_length(values) - 1 + grids, _NO_TOP)


def _alignment_targets(top, fmt, guard_bits, n_terms=2):
    """
    Grid every term of a lane sum is shifted onto.

    The largest term keeps the 2 * B_m + 2 bits of a full product plus one.
    When the carries of ``n_terms`` terms would outgrow the guard bits, the
    grid moves up by the missing headroom.
    """
    kept = 2 * fmt.mantissa_width + 3
    carries = (n_terms - 1).bit_length()
    headroom = max(0, kept + carries - (2 * fmt.mantissa_width + guard_bits))
    return np.where(top > _NO_TOP, top - kept + 1 + headroom, 0)


def _accumulate(terms, fmt, guard_bits):
    """Sum per lane of ``(values, grids)`` terms aligned on a shared grid."""
    top = np.maximum.reduce([_tops(values, grids) for values, grids in terms])
    target = _alignment_targets(top, fmt, guard_bits, len(terms))
    total = sum(shift_toward_zero(values, target - grids) for values, grids in terms)
    return WideAccumulator(total, target, fmt, guard_bits)


def _lanes(block, dtype):
    return as_lanes(block.significands(), dtype), block.lsb_exponents()


def _parts(block, dtype):
    """(re, im, re grid, im grid) of a block's lanes."""
    lanes, grids = _lanes(block, dtype)
    return (*_split(lanes), *_split(grids))


def block_add(a, b, counters=None, guard_bits=None):
    counters = _fresh(counters)
    fmt = _check_operands(a, b)
    guard_bits = _guard_bits(guard_bits)
    mode = _result_mode(a, b)
    dtype = lane_dtype(fmt, guard_bits)

    counters.complex_adds += a.n_samples
    counters.exponent_ops += 1  # E_A - E_B
    # on a tie A stays put and nothing is aligned
    if a.common_exponent != b.common_exponent:
        shifted = b if a.common_exponent > b.common_exponent else a
        counters.mantissa_scalings += _live(shifted.significands())

    counters.mantissa_scalings += _box_decodes(a) + _box_decodes(b)
    if a.box_shifts.any() or b.box_shifts.any():
        counters.exponent_ops += 1

    acc = _accumulate([_lanes(a, dtype), _lanes(b, dtype)], fmt, guard_bits)

    counters.mantissa_scalings += acc.live_count()
    counters.exponent_ops += 1  # fresh common exponent
    if mode == Encoding.BOX:
        counters.exponent_ops += 1  # U
    return acc.to_block(mode)


def _interleave(real, imag):
    out = np.empty(real.shape[:-1] + (2 * real.shape[-1],), dtype=real.dtype)
    out[..., 0::2] = real
    out[..., 1::2] = imag
    return out


def _split(lanes):
    return lanes[..., 0::2], lanes[..., 1::2]


class _Products:
    """The four real products of complex factors, with their grids."""

    def __init__(self, a, b):
        ar, ai, gar, gai = a
        br, bi, gbr, gbi = b
        self.rr, self.ii = ar * br, ai * bi
        self.ri, self.ir = ar * bi, ai * br
        self.g_rr, self.g_ii = gar + gbr, gai + gbi
        self.g_ri, self.g_ir = gar + gbi, gai + gbr

    def all(self):
        return (self.rr, self.ii, self.ri, self.ir)

    def live(self):
        return sum(_live(p) for p in self.all())

    def aligns(self):
        return _live((self.rr != 0) & (self.ii != 0)) + _live((self.ri != 0) & (self.ir != 0))


def _product_exponent_ops(a, b):
    """Exponent offsets of the four intermediate products: 0, -B_m or -2B_m."""
    xa_r, xa_i = _split(a.box_shifts)
    xb_r, xb_i = _split(b.box_shifts)
    pairs = [(xa_r, xb_r), (xa_i, xb_i), (xa_r, xb_i), (xa_i, xb_r)]
    ops = 0
    if any(((x ^ y) == 1).any() for x, y in pairs):
        ops += 1
    if any(((x & y) == 1).any() for x, y in pairs):
        ops += 1
    return ops


def block_mul(a, b, counters=None, guard_bits=None):
    counters = _fresh(counters)
    fmt = _check_operands(a, b)
    guard_bits = _guard_bits(guard_bits)
    mode = _result_mode(a, b)
    dtype = lane_dtype(fmt, guard_bits)

    products = _Products(_parts(a, dtype), _parts(b, dtype))
    box_factors = (a.mode == Encoding.BOX) + (b.mode == Encoding.BOX)

    counters.complex_mults += a.n_samples
    counters.exponent_ops += 1 + _product_exponent_ops(a, b)  # E_A + E_B - bias
    counters.mantissa_scalings += products.live() * (1 + box_factors)
    counters.mantissa_scalings += products.aligns()

    acc = _accumulate(
        [
            (_interleave(products.rr, products.ri), _interleave(products.g_rr, products.g_ri)),
            (_interleave(-products.ii, products.ir), _interleave(products.g_ii, products.g_ir)),
        ],
        fmt,
        guard_bits,
    )

    counters.mantissa_scalings += acc.live_count()
    counters.exponent_ops += 1
    if mode == Encoding.BOX:
        counters.exponent_ops += 1
    return acc.to_block(mode)


def _conv_layout(n1, n2):
    """Row k, column n of the (n1, n1 + n2 - 1) term grid pairs a[k] with b[n - k]."""
    k = np.arange(n1)[:, None]
    j = np.arange(n1 + n2 - 1)[None, :] - k
    valid = (j >= 0) & (j < n2)
    # first contributing row of each column starts the running sum
    starts = valid & (k == np.maximum(0, np.arange(n1 + n2 - 1) - n2 + 1)[None, :])
    return k, np.clip(j, 0, n2 - 1), valid, valid & ~starts


def _gather(parts, index, valid):
    return tuple(np.where(valid, part[index], 0) for part in parts)


def block_conv(a, b, counters=None, guard_bits=None):
    counters = _fresh(counters)
    fmt = _check_operands(a, b, same_size=False)
    if a.n_samples > b.n_samples:
        a, b = b, a
    guard_bits = _guard_bits(guard_bits)
    mode = _result_mode(a, b)
    dtype = lane_dtype(fmt, guard_bits)
    n_out = a.n_samples + b.n_samples - 1

    k, j, valid, adds = _conv_layout(a.n_samples, b.n_samples)
    a_parts = _gather(_parts(a, dtype), k, valid)
    b_parts = _gather(_parts(b, dtype), j, valid)
    ar, ai, br, bi = a_parts[0], a_parts[1], b_parts[0], b_parts[1]
    products = _Products(a_parts, b_parts)

    top_re = np.maximum(_tops(products.rr, products.g_rr), _tops(products.ii, products.g_ii))
    top_im = np.maximum(_tops(products.ri, products.g_ri), _tops(products.ir, products.g_ir))
    # every column sums up to 2 * n1 products
    n_terms = 2 * a.n_samples
    target_re = _alignment_targets(top_re.max(axis=0), fmt, guard_bits, n_terms)
    target_im = _alignment_targets(top_im.max(axis=0), fmt, guard_bits, n_terms)

    term_re = shift_toward_zero(products.rr, target_re - products.g_rr) - shift_toward_zero(
        products.ii, target_re - products.g_ii
    )
    term_im = shift_toward_zero(products.ri, target_im - products.g_ri) + shift_toward_zero(
        products.ir, target_im - products.g_ir
    )
    running_re, running_im = np.cumsum(term_re, axis=0), np.cumsum(term_im, axis=0)

    counters.complex_mults += int(valid.sum())
    counters.complex_adds += int(adds.sum())

    operand_decodes = 0
    if a.mode == Encoding.BOX:
        operand_decodes += _live(ar) + _live(ai)
    if b.mode == Encoding.BOX:
        operand_decodes += _live(br) + _live(bi)
    counters.mantissa_scalings += products.live() + products.aligns() + operand_decodes

    for term, running in ((term_re, running_re), (term_im, running_im)):
        prior = running - term
        counters.mantissa_scalings += _live(adds & (term != 0) & (prior != 0))
        counters.mantissa_scalings += _live(adds & (running != 0))
        if mode == Encoding.BOX:
            counters.mantissa_scalings += _live(adds & (prior != 0)) + _live(adds & (term != 0))

    live_outputs = _live((top_re.max(axis=0) > _NO_TOP) | (top_im.max(axis=0) > _NO_TOP))
    counters.exponent_ops += 1 + 3 * live_outputs
    logger.debug(f"Convolved {a.n_samples}x{b.n_samples} samples into {n_out}")

    acc = WideAccumulator(
        _interleave(running_re[-1], running_im[-1]),
        _interleave(target_re, target_im),
        fmt,
        guard_bits,
    )
    return acc.to_block(mode)


def predicted_costs(op, mode, n1, n2=None):
    """Worst-case mantissa and exponent costs of one operation."""
    op, mode = Operation(op), Encoding(mode)
    if n1 < 1 or (n2 is not None and n2 < 1):
        raise ValueError(f"sizes must be positive, got ({n1}, {n2})")

    if op == Operation.ADD:
        mantissa = {Encoding.IEEE754: 4, Encoding.COMMON: 4, Encoding.BOX: 8}[mode] * n1
        exponent = {Encoding.IEEE754: 2 * n1, Encoding.COMMON: 2, Encoding.BOX: 4}[mode]
        return OpCostCounters(mantissa, exponent, complex_adds=n1)

    if op == Operation.MUL:
        mantissa = {Encoding.IEEE754: 8, Encoding.COMMON: 8, Encoding.BOX: 16}[mode] * n1
        exponent = {Encoding.IEEE754: 6 * n1, Encoding.COMMON: 2, Encoding.BOX: 5}[mode]
        return OpCostCounters(mantissa, exponent, complex_mults=n1)

    if op != Operation.CONV:
        raise ValueError(f"unknown operation {op}")
    if n2 is None:
        raise ValueError("convolution needs both operand lengths")
    mults, adds = n1 * n2, (n1 - 1) * (n2 - 1)
    if mode == Encoding.IEEE754:
        return OpCostCounters(6 * mults + 4 * adds, 6 * mults + 2 * adds, mults, adds)
    per_mult, per_add = (10, 8) if mode == Encoding.BOX else (6, 4)
    return OpCostCounters(
        per_mult * mults + per_add * adds, 3 * (n1 + n2 - 1) + 1, mults, adds
    )


def _real_lanes(values):
    values = np.asarray(values, dtype=np.complex128)
    return _interleave(values.real.copy(), values.imag.copy())


def _exponents(values):
    return np.frexp(values)[1]


def _differ(x, y):
    return (x != 0) & (y != 0) & (_exponents(x) != _exponents(y))


def scalar_add(x, y, fmt, counters=None):
    counters = _fresh(counters)
    x, y = truncate(x, fmt), truncate(y, fmt)
    if x.shape != y.shape:
        raise BlockSizeMismatch(f"operands hold {x.size} and {y.size} samples")
    result = truncate(x + y, fmt)

    xl, yl, sl = _real_lanes(x), _real_lanes(y), _real_lanes(result)
    counters.complex_adds += x.size
    counters.exponent_ops += _live((xl != 0) & (yl != 0))
    counters.mantissa_scalings += _live(_differ(xl, yl)) + _live(sl)
    return result


def _count_scalar_products(counters, xr, xi, yr, yi):
    rr, ii, ri, ir = xr * yr, xi * yi, xr * yi, xi * yr
    live = sum(_live(p) for p in (rr, ii, ri, ir))
    both = _live((rr != 0) & (ii != 0)) + _live((ri != 0) & (ir != 0))
    counters.exponent_ops += live + both
    counters.mantissa_scalings += live + _live(_differ(rr, ii)) + _live(_differ(ri, ir))
    return rr - ii, ri + ir


def scalar_mul(x, y, fmt, counters=None):
    counters = _fresh(counters)
    x, y = truncate(x, fmt), truncate(y, fmt)
    if x.shape != y.shape:
        raise BlockSizeMismatch(f"operands hold {x.size} and {y.size} samples")

    counters.complex_mults += x.size
    real, imag = _count_scalar_products(counters, x.real, x.imag, y.real, y.imag)
    result = truncate(real + 1j * imag, fmt)
    counters.mantissa_scalings += _live(result.real) + _live(result.imag)
    return result


def scalar_conv(x, y, fmt, counters=None):
    counters = _fresh(counters)
    x, y = truncate(x, fmt), truncate(y, fmt)
    if x.size > y.size:
        x, y = y, x

    k, j, valid, adds = _conv_layout(x.size, y.size)
    xv = np.where(valid, x[k], 0)
    yv = np.where(valid, y[j], 0)

    counters.complex_mults += int(valid.sum())
    counters.complex_adds += int(adds.sum())
    term_re, term_im = _count_scalar_products(counters, xv.real, xv.imag, yv.real, yv.imag)

    for term in (term_re, term_im):
        running = np.cumsum(term, axis=0)
        prior = running - term
        counters.exponent_ops += _live(adds & (term != 0) & (prior != 0))
        counters.mantissa_scalings += _live(adds & (term != 0) & (prior != 0))
        counters.mantissa_scalings += _live(adds & (running != 0))

    return truncate(term_re.sum(axis=0) + 1j * term_im.sum(axis=0), fmt)


BLOCK_OPERATIONS = {Operation.ADD: block_add, Operation.MUL: block_mul, Operation.CONV: block_conv}
SCALAR_OPERATIONS = {
    Operation.ADD: scalar_add,
    Operation.MUL: scalar_mul,
    Operation.CONV: scalar_conv,
}


def evaluate(op, mode, x, y, fmt, counters=None):
    """
    Run ``op`` on complex samples ``x`` and ``y`` under ``mode``.

    Block modes encode the operands, run the block operation and decode the
    result, IEEE754 runs the scalar reference. Returns complex128 samples.
    """
    op, mode = Operation(op), Encoding(mode)
    if mode == Encoding.IEEE754:
        return SCALAR_OPERATIONS[op](x, y, fmt, counters)
    block = BLOCK_OPERATIONS[op](encode(x, fmt, mode), encode(y, fmt, mode), counters)
    return decode(block)


def adversarial_operands(op, n1, n2=None, fmt=None):
    """Operands that drive every pre- and post-scaling stage of ``op``."""
    fmt = fmt or FloatFormat.by_name(settings.CBFP_DEFAULT_FORMAT)
    if op == Operation.ADD:
        x, y = np.full(n1, 1.5 + 1.5j), np.full(n1, 0.75 + 0.75j)
    else:
        x = np.full(n1, 1.9 + 0.95j)
        y = np.full(n1 if op == Operation.MUL else n2, 1.9 + 1.9j)
    return truncate(x, fmt), truncate(y, fmt)


def random_operands(n, fmt, rng):
    """Random samples over a spread of binades, a few components exactly zero."""
    span = min(2 * fmt.mantissa_width, (fmt.bias - 1) // 2)
    significand = 1.0 + rng.random(2 * n)
    exponent = rng.integers(-span, 1, size=2 * n)
    sign = rng.choice([-1.0, 1.0], size=2 * n)
    component = sign * np.ldexp(significand, exponent)
    component[rng.random(2 * n) < 0.05] = 0.0
    return truncate(component[0::2] + 1j * component[1::2], fmt)


@dataclass(frozen=True)
class AuditRow:
    op: str
    mode: str
    n1: int
    n2: int
    predicted: OpCostCounters
    measured: OpCostCounters
    adversarial: OpCostCounters

    @property
    def within_bounds(self):
        return self.measured.dominated_by(self.predicted) and self.adversarial.dominated_by(
            self.predicted
        )

    def discrepancies(self):
        notes = []
        for name in ("mantissa_scalings", "exponent_ops"):
            predicted = getattr(self.predicted, name)
            reached = getattr(self.adversarial, name)
            if reached != predicted:
                notes.append(
                    f"{self.op} {self.mode} ({self.n1},{self.n2}) {name}: "
                    f"predicted {predicted}, worst case reached {reached}"
                )
        return notes

    def csv_row(self):
        return [
            str(self.op),
            str(self.mode),
            self.n1,
            self.n2,
            self.predicted.mantissa_scalings,
            self.measured.mantissa_scalings,
            self.predicted.exponent_ops,
            self.measured.exponent_ops,
        ]


def audit(op, mode, sizes, trials, seed, fmt=None):
    """
    Measure ``op`` under ``mode`` against the worst-case cost model.

    ``sizes`` holds N for add and mul, (N1, N2) pairs for convolution. The
    measured counters are the worst over ``trials`` random operand pairs.
    """
    fmt = fmt or FloatFormat.by_name(settings.CBFP_DEFAULT_FORMAT)
    rows = []
    for index, size in enumerate(sizes):
        n1, n2 = size if op == Operation.CONV else (size, size)
        predicted = predicted_costs(op, mode, n1, n2 if op == Operation.CONV else None)

        worst = OpCostCounters()
        rng = np.random.default_rng(derive_seed(seed, index))
        for _ in range(trials):
            x = random_operands(n1, fmt, rng)
            y = random_operands(n2, fmt, rng)
            counters = OpCostCounters()
            evaluate(op, mode, x, y, fmt, counters)
            worst = worst.maximum(counters)

        adversarial = OpCostCounters()
        evaluate(op, mode, *adversarial_operands(op, n1, n2, fmt), fmt, adversarial)

        row = AuditRow(op, mode, n1, n2, predicted, worst, adversarial)
        if not row.within_bounds:
            logger.warning(f"{op} {mode} ({n1},{n2}) exceeded its cost bound: {worst}")
        for note in row.discrepancies():
            logger.warning(note)
        rows.append(row)
    return rows
