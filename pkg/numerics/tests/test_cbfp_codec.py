import numpy as np
from django.test import SimpleTestCase
from hypothesis import given
from hypothesis import settings as hypothesis_settings
from hypothesis import strategies as st

from numerics.cbfp_codec import (
    CbfpBlock,
    decode,
    encode_box,
    encode_common,
    encode_lanes,
    eer_area,
    eer_classify,
    exponent_pairs,
    max_exponent_difference,
    requantize,
    wordlength_bits,
)
from numerics.choices import Encoding, Region
from numerics.exceptions import ExponentOverflow, UnsupportedValue
from numerics.ieee_fields import DOUBLE, FORMATS, HALF, SINGLE, truncate
from numerics.lanes import bit_length, shift_toward_zero


def shared_exponent_blocks(rng, n_blocks, n_samples, fmt):
    """Blocks whose non-zero components all carry one random exponent."""
    exponent = rng.integers(-fmt.bias + 2, fmt.bias, size=(n_blocks, 1))
    significand = 1.0 + rng.random((n_blocks, 2 * n_samples))
    sign = rng.choice([-1.0, 1.0], size=(n_blocks, 2 * n_samples))
    components = truncate(sign * np.ldexp(significand, exponent), fmt)
    return components[:, 0::2] + 1j * components[:, 1::2]


class EncodeCommonTestCase(SimpleTestCase):
    def test_equal_exponents(self):
        block = encode_common([1.0 + 1.0j], SINGLE)

        self.assertEqual(block.common_exponent, 127)
        np.testing.assert_array_equal(block.signs, [0, 0])
        np.testing.assert_array_equal(block.leads, [1, 1])
        np.testing.assert_array_equal(block.mantissas, [0, 0])
        np.testing.assert_array_equal(block.box_shifts, [0, 0])

    def test_small_component_is_zeroed(self):
        block = encode_common([8.0 + 2.0**-27 * 1j], SINGLE)

        self.assertEqual(block.common_exponent, 130)
        self.assertEqual((block.leads[0], block.mantissas[0]), (1, 0))
        self.assertEqual((block.leads[1], block.mantissas[1]), (0, 0))
        np.testing.assert_array_equal(decode(block), [8.0 + 0j])

    def test_one_place_shift(self):
        block = encode_common([1.5 + 0.75j], SINGLE)

        self.assertEqual(block.common_exponent, 127)
        self.assertEqual((block.leads[0], block.mantissas[0]), (1, 1 << 22))
        self.assertEqual((block.leads[1], block.mantissas[1]), (0, (1 << 22) + (1 << 21)))
        np.testing.assert_array_equal(decode(block), [1.5 + 0.75j])

    def test_signs_are_kept(self):
        block = encode_common([-1.0 - 0.5j, 2.0 + 0j], SINGLE)
        np.testing.assert_array_equal(block.signs, [1, 1, 0, 0])
        np.testing.assert_array_equal(decode(block), [-1.0 - 0.5j, 2.0 + 0j])

    def test_zero_components_do_not_set_the_exponent(self):
        block = encode_common([0.0 + 0.25j], SINGLE)
        self.assertEqual(block.common_exponent, 125)

    def test_all_zero_block(self):
        block = encode_common([0j, 0j], SINGLE)
        self.assertEqual(block.common_exponent, 0)
        np.testing.assert_array_equal(decode(block), [0j, 0j])

    def test_rejects_non_normal_input(self):
        with self.assertRaises(UnsupportedValue):
            encode_common([complex(np.nan, 0)], SINGLE)
        with self.assertRaises(UnsupportedValue):
            encode_common([1e-45 + 0j], SINGLE)


class EncodeBoxTestCase(SimpleTestCase):
    def test_boxed_component_survives(self):
        block = encode_box([8.0 + 2.0**-27 * 1j], SINGLE)

        self.assertEqual(block.common_exponent, 130)
        self.assertEqual(block.box_shifts[1], 1)
        # e' = 100 + 23 = 123, shift 7 moves the lead bit to mantissa bit 16
        self.assertEqual((block.leads[1], block.mantissas[1]), (0, 1 << 16))
        np.testing.assert_array_equal(decode(block), [8.0 + 2.0**-27 * 1j])

    def test_common_and_box_differ_on_the_same_sample(self):
        sample = [8.0 + 2.0**-27 * 1j]
        np.testing.assert_array_equal(decode(encode_common(sample, SINGLE)), [8.0 + 0j])
        np.testing.assert_array_equal(decode(encode_box(sample, SINGLE)), sample)

    def test_equal_exponents_match_common(self):
        samples = [1.25 + 1.5j, -1.75 + 1.0j]
        common, box = encode_common(samples, SINGLE), encode_box(samples, SINGLE)

        self.assertEqual(box.common_exponent, common.common_exponent)
        np.testing.assert_array_equal(box.mantissas, common.mantissas)
        np.testing.assert_array_equal(box.leads, common.leads)
        self.assertFalse(box.box_shifts.any())

    def test_component_beyond_the_box_reach(self):
        # e = E - 50: after boxing the shift is 27 > 23
        block = encode_box([1.0 + 2.0**-50 * 1j], SINGLE)
        self.assertEqual(
            (block.leads[1], block.mantissas[1], block.box_shifts[1]), (0, 0, 1)
        )
        self.assertEqual(decode(block)[0].imag, 0.0)

    def test_common_block_with_box_bits_is_invalid(self):
        with self.assertRaises(ValueError):
            CbfpBlock(SINGLE, Encoding.COMMON, 127, [0, 0], [1, 1], [0, 1], [0, 0])


class CbfpBlockTestCase(SimpleTestCase):
    def test_arrays_are_read_only(self):
        block = encode_box([1.0 + 0.5j], SINGLE)
        with self.assertRaises(ValueError):
            block.mantissas[0] = 1

    def test_source_arrays_are_copied(self):
        leads = np.array([1, 1], dtype=np.uint8)
        block = CbfpBlock(SINGLE, Encoding.COMMON, 127, [0, 0], leads, [0, 0], [0, 0])
        leads[0] = 0
        self.assertEqual(block.leads[0], 1)

    def test_equality(self):
        samples = [1.0 + 0.5j, 0.25 - 2j]
        self.assertEqual(encode_box(samples, SINGLE), encode_box(samples, SINGLE))
        self.assertNotEqual(encode_box(samples, SINGLE), encode_common(samples, SINGLE))

    def test_ulp(self):
        block = encode_box([8.0 + 2.0**-27 * 1j], SINGLE)
        np.testing.assert_array_equal(block.ulp(), [2.0**-20, 2.0**-43])

    def test_decoded_magnitudes_stay_below_the_exponent_bound(self):
        rng = np.random.default_rng(3)
        samples = shared_exponent_blocks(rng, 1, 16, SINGLE)[0] * np.ldexp(
            1.0, rng.integers(-40, 1, size=16)
        )
        block = encode_box(truncate(samples, SINGLE), SINGLE)
        bound = 2.0 ** (block.common_exponent - SINGLE.bias + 1)
        decoded = decode(block)
        self.assertTrue((np.abs(decoded.real) < bound).all())
        self.assertTrue((np.abs(decoded.imag) < bound).all())


class RoundTripTestCase(SimpleTestCase):
    def test_shared_exponent_blocks_are_exact(self):
        # 3 formats x 3 sizes x 12 000 blocks, over 10**5 in total
        rng = np.random.default_rng(2024)
        for fmt in FORMATS.values():
            for n_samples in (1, 7, 64):
                with self.subTest(fmt=fmt.name, n_samples=n_samples):
                    samples = shared_exponent_blocks(rng, 12_000, n_samples, fmt)
                    for mode in (Encoding.COMMON, Encoding.BOX):
                        np.testing.assert_array_equal(requantize(samples, fmt, mode), samples)

    def test_requantize_matches_per_block_codec(self):
        rng = np.random.default_rng(11)
        samples = truncate(
            (rng.standard_normal((20, 8)) + 1j * rng.standard_normal((20, 8)))
            * np.ldexp(1.0, rng.integers(-30, 30, size=(20, 8))),
            SINGLE,
        )
        for mode, encoder in ((Encoding.COMMON, encode_common), (Encoding.BOX, encode_box)):
            batch = requantize(samples, SINGLE, mode)
            for row, block_samples in zip(batch, samples):
                np.testing.assert_array_equal(row, decode(encoder(block_samples, SINGLE)))

    def test_exact_when_no_set_bit_is_truncated(self):
        # 1.5 * 2**-3 needs two significand bits, shift 3 keeps both
        samples = [1.0 + 1.5 * 2.0**-3 * 1j]
        np.testing.assert_array_equal(decode(encode_common(samples, SINGLE)), samples)

    def test_inexact_when_a_set_bit_is_truncated(self):
        samples = [1.0 + (1 + 2.0**-23) * 2.0**-3 * 1j]
        self.assertNotEqual(decode(encode_common(samples, SINGLE))[0], samples[0])


class TruncationErrorTestCase(SimpleTestCase):
    @hypothesis_settings(max_examples=60, deadline=None)
    @given(
        seed=st.integers(0, 2**32 - 1),
        fmt_name=st.sampled_from(sorted(FORMATS)),
        spread=st.integers(0, 60),
    )
    def test_error_bounded_by_one_stored_unit(self, seed, fmt_name, spread):
        fmt = FORMATS[fmt_name]
        rng = np.random.default_rng(seed)
        spread = min(spread, fmt.bias - 2)
        exponent = rng.integers(-spread, 1, size=16)
        samples = truncate(
            (1 + rng.random(8)) * np.ldexp(1.0, exponent[0::2])
            + 1j * (1 + rng.random(8)) * np.ldexp(1.0, exponent[1::2]),
            fmt,
        )

        errors = {}
        for encoder in (encode_common, encode_box):
            block = encoder(samples, fmt)
            decoded = decode(block)
            error = np.empty(16)
            error[0::2] = np.abs(decoded.real - samples.real)
            error[1::2] = np.abs(decoded.imag - samples.imag)
            errors[block.mode] = error

            original = np.empty(16)
            original[0::2], original[1::2] = samples.real, samples.imag
            biased = np.frexp(original)[1] - 1 + fmt.bias
            inside = block.common_exponent - biased <= max_exponent_difference(fmt) * (
                2 if block.mode == Encoding.BOX else 1
            )
            # Verify: at most one unit in the last stored place
            self.assertTrue((error[inside] <= block.ulp()[inside]).all())

        # Verify: boxing never loses what Common keeps
        self.assertTrue((errors[Encoding.BOX] <= errors[Encoding.COMMON]).all())


class EffectiveEncodingRegionTestCase(SimpleTestCase):
    def test_examples(self):
        self.assertEqual(eer_classify(130, 130, 130, SINGLE, Encoding.COMMON), Region.INSIDE)
        self.assertEqual(eer_classify(130, 106, 130, SINGLE, Encoding.COMMON), Region.OUTSIDE)
        self.assertEqual(eer_classify(130, 106, 130, SINGLE, Encoding.BOX), Region.INSIDE)
        self.assertEqual(eer_classify(130, 83, 130, SINGLE, Encoding.BOX), Region.OUTSIDE)

    def test_exponent_above_the_maximum(self):
        with self.assertRaises(ValueError):
            eer_classify(131, 130, 130, SINGLE, Encoding.COMMON)

    def test_max_exponent_difference(self):
        self.assertEqual(max_exponent_difference(SINGLE), 23)
        self.assertEqual(max_exponent_difference(HALF), 10)
        self.assertEqual(max_exponent_difference(DOUBLE), 52)

    def test_exponent_gap_boundaries(self):
        # brute force over gaps at single precision
        for gap in range(61):
            sample = [1.0 + 2.0**-gap * 1j]
            with self.subTest(gap=gap):
                self.assertEqual(
                    decode(encode_common(sample, SINGLE))[0].imag != 0, gap <= 23
                )
                self.assertEqual(decode(encode_box(sample, SINGLE))[0].imag != 0, gap <= 46)
                self.assertEqual(
                    eer_classify(127, 127 - gap, 127, SINGLE, Encoding.COMMON) == Region.INSIDE,
                    gap <= 23,
                )

    def test_area_sides(self):
        for fmt in FORMATS.values():
            width = fmt.mantissa_width
            with self.subTest(fmt=fmt.name):
                self.assertEqual(eer_area(fmt, Encoding.COMMON), (width + 1) ** 2)
                self.assertEqual(eer_area(fmt, Encoding.BOX), (2 * width + 1) ** 2)

    def test_area_ratio_tends_to_four(self):
        ratio = eer_area(DOUBLE, Encoding.BOX) / eer_area(DOUBLE, Encoding.COMMON)
        self.assertAlmostEqual(ratio, 4.0, delta=0.1)

    def test_exponent_pairs(self):
        pairs = exponent_pairs([8.0 + 2.0**-27 * 1j, 0j], SINGLE)
        np.testing.assert_array_equal(pairs, [[130, 100], [0, 0]])


class WordlengthTestCase(SimpleTestCase):
    def test_single_precision_examples(self):
        self.assertEqual(wordlength_bits(Encoding.IEEE754, 25, SINGLE), 1600)
        self.assertEqual(wordlength_bits(Encoding.COMMON, 25, SINGLE), 1258)
        self.assertEqual(wordlength_bits(Encoding.BOX, 25, SINGLE), 1308)

    def test_formulas(self):
        for fmt in FORMATS.values():
            for n in (1, 25, 9600):
                with self.subTest(fmt=fmt.name, n=n):
                    self.assertEqual(wordlength_bits(Encoding.IEEE754, n, fmt), 2 * n * fmt.wordlength)
                    self.assertEqual(
                        wordlength_bits(Encoding.COMMON, n, fmt),
                        2 * n * (1 + 1 + fmt.mantissa_width) + fmt.exponent_width,
                    )
                    self.assertEqual(
                        wordlength_bits(Encoding.BOX, n, fmt),
                        2 * n * (1 + 1 + 1 + fmt.mantissa_width) + fmt.exponent_width,
                    )

    @given(n=st.integers(1, 100_000), fmt_name=st.sampled_from(sorted(FORMATS)))
    def test_ordering(self, n, fmt_name):
        fmt = FORMATS[fmt_name]
        self.assertLess(wordlength_bits(Encoding.COMMON, n, fmt), wordlength_bits(Encoding.BOX, n, fmt))
        self.assertLess(wordlength_bits(Encoding.BOX, n, fmt), wordlength_bits(Encoding.IEEE754, n, fmt))

    def test_rejects_empty_block(self):
        with self.assertRaises(ValueError):
            wordlength_bits(Encoding.BOX, 0, SINGLE)


class EncodeLanesTestCase(SimpleTestCase):
    def test_reencodes_integer_lanes(self):
        # 3 * 2**-1 and 3 * 2**-3
        block = encode_lanes(np.array([3, -3]), np.array([-1, -3]), SINGLE, Encoding.COMMON)
        np.testing.assert_array_equal(decode(block), [1.5 - 0.375j])

    def test_overflow(self):
        with self.assertRaises(ExponentOverflow):
            encode_lanes(np.array([1, 0]), np.array([200, 0]), SINGLE, Encoding.COMMON)

    def test_underflow_flushes_block(self):
        block = encode_lanes(np.array([1, 1]), np.array([-200, -200]), SINGLE, Encoding.BOX)
        self.assertEqual(block.common_exponent, 0)
        np.testing.assert_array_equal(decode(block), [0j])

    def test_python_integer_lanes(self):
        values = np.array([(1 << 110) + 1, -(1 << 60)], dtype=object)
        block = encode_lanes(values, np.array([-110, -60]), DOUBLE, Encoding.BOX)
        np.testing.assert_array_equal(decode(block), [1.0 - 1.0j])


class LaneHelpersTestCase(SimpleTestCase):
    @given(st.lists(st.integers(-(2**62), 2**62), min_size=1, max_size=20))
    def test_bit_length_int64(self, values):
        expected = [abs(v).bit_length() for v in values]
        np.testing.assert_array_equal(bit_length(np.array(values, dtype=np.int64)), expected)

    def test_bit_length_near_powers_of_two(self):
        values = np.array([2**53 - 1, 2**53, 2**53 + 1, 2**62 - 1], dtype=np.int64)
        np.testing.assert_array_equal(bit_length(values), [53, 54, 54, 62])

    def test_bit_length_python_integers(self):
        values = np.array([0, 1, -(1 << 120)], dtype=object)
        np.testing.assert_array_equal(bit_length(values), [0, 1, 121])

    def test_shift_truncates_toward_zero(self):
        out = shift_toward_zero(np.array([7, -7, 5, 1]), np.array([1, 1, -2, 80]))
        np.testing.assert_array_equal(out, [3, -3, 20, 0])
