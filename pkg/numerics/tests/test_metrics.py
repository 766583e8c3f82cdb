import numpy as np
from django.test import SimpleTestCase, override_settings
from hypothesis import given
from hypothesis import settings as hypothesis_settings
from hypothesis import strategies as st

from numerics.cbfp_codec import decode, encode_box, encode_common
from numerics.exceptions import AllZero, LengthMismatch, RatioOutOfRange, ZeroReference
from numerics.ieee_fields import HALF, SINGLE
from numerics.metrics import (
    DB_PER_BINADE,
    derive_seed,
    dynamic_range_db,
    evm_percent,
    generate_ratio_blocks,
    ratio_exponent_span,
    snr_db,
)


def components(samples):
    return np.concatenate([samples.real, samples.imag])


class EvmTestCase(SimpleTestCase):
    def test_identical_signals(self):
        result = evm_percent([1 + 1j, 2 - 1j], [1 + 1j, 2 - 1j])
        self.assertEqual(result.evm_percent, 0.0)
        self.assertEqual(result.n_samples, 2)

    def test_perturbed_entry(self):
        self.assertAlmostEqual(evm_percent([3, 4], [3, 4.05]).evm_percent, 1.0, places=9)

    def test_errors(self):
        with self.assertRaises(ZeroReference):
            evm_percent([0, 0], [1, 0])
        with self.assertRaises(LengthMismatch):
            evm_percent([1, 2], [1])

    @hypothesis_settings(max_examples=50)
    @given(seed=st.integers(0, 2**32 - 1), scale=st.floats(1e-6, 1e6))
    def test_scale_invariance(self, seed, scale):
        rng = np.random.default_rng(seed)
        x = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        y = x + 0.01 * rng.standard_normal(16)
        self.assertAlmostEqual(
            evm_percent(scale * x, scale * y).evm_percent,
            evm_percent(x, y).evm_percent,
            delta=1e-9,
        )

    @hypothesis_settings(max_examples=50)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_triangle_bound(self, seed):
        rng = np.random.default_rng(seed)
        x, test, other = (rng.standard_normal(8) + 1j * rng.standard_normal(8) for _ in range(3))
        bound = evm_percent(x, other).evm_percent + np.linalg.norm(other - test) / np.linalg.norm(x) * 100

        evm = evm_percent(x, test).evm_percent
        self.assertGreaterEqual(evm, 0.0)
        self.assertLessEqual(evm, bound * (1 + 1e-12))


class DynamicRangeTestCase(SimpleTestCase):
    def test_examples(self):
        self.assertEqual(dynamic_range_db([1, 1, 1]), 0.0)
        self.assertAlmostEqual(dynamic_range_db([1, 0.001]), 60.0)
        self.assertAlmostEqual(dynamic_range_db([0, 2j, -0.02]), 40.0)

    def test_all_zero(self):
        with self.assertRaises(AllZero):
            dynamic_range_db([0, 0j])


class SnrTestCase(SimpleTestCase):
    def test_known_noise_power(self):
        signal = np.ones(4)
        self.assertAlmostEqual(snr_db(signal, signal + 0.1), 20.0)


class DeriveSeedTestCase(SimpleTestCase):
    def test_independent_streams(self):
        seeds = {derive_seed(7, index) for index in range(100)}
        self.assertEqual(len(seeds), 100)
        self.assertEqual(derive_seed(7, 3), derive_seed(7, 3))
        self.assertNotEqual(derive_seed(7, 3), derive_seed(8, 3))
        self.assertTrue(all(0 <= seed < 2**64 for seed in seeds))


@override_settings(CBFP_RATIO_EXPONENT_TOP=130)
class RatioBlocksTestCase(SimpleTestCase):
    def test_zero_ratio_shares_one_exponent(self):
        x, y = generate_ratio_blocks(0, 16, SINGLE, seed=1)
        for block in (x, y):
            magnitude = np.abs(components(block))
            # biased exponent 130 is the binade [8, 16)
            self.assertTrue(((magnitude >= 8) & (magnitude < 16)).all())
            self.assertGreater(len(np.unique(magnitude)), 16)

    def test_top_binade_significands_are_spread(self):
        for ratio_db in (0, 100, 117):
            blocks = generate_ratio_blocks(ratio_db, 64, SINGLE, seed=5)
            parts = np.abs(np.concatenate([components(block) for block in blocks]))
            top = parts[parts >= 8]
            with self.subTest(ratio_db=ratio_db):
                self.assertGreater(top.size, 1)
                self.assertEqual(len(np.unique(top)), top.size)

    def test_exponent_spans(self):
        self.assertEqual(ratio_exponent_span(0), 0)
        self.assertEqual(ratio_exponent_span(138.5), 23)
        self.assertEqual(ratio_exponent_span(200), 33)

    def test_realized_dynamic_range(self):
        for ratio_db in range(5, 201, 15):
            span = ratio_exponent_span(ratio_db)
            x, y = generate_ratio_blocks(ratio_db, 32, SINGLE, seed=ratio_db)
            for block in (x, y):
                with self.subTest(ratio_db=ratio_db):
                    realized = dynamic_range_db(components(block))
                    self.assertLess(abs(realized - span * DB_PER_BINADE), DB_PER_BINADE)
                    self.assertLess(abs(realized - ratio_db), 1.5 * DB_PER_BINADE)

    def test_common_keeps_only_the_lead_bit_at_the_mantissa_width(self):
        x, _ = generate_ratio_blocks(138.5, 16, SINGLE, seed=2)
        parts = components(x)
        smallest = np.argmin(np.abs(parts))

        decoded = np.abs(components(decode(encode_common(x, SINGLE))))
        # 23 binades below the top exponent only the lead bit, 2**(130 - 127 - 23), survives
        self.assertEqual(decoded[smallest], 2.0**-20)

    def test_box_retains_what_common_zeroes(self):
        x, _ = generate_ratio_blocks(200, 16, SINGLE, seed=3)
        smallest = np.argmin(np.abs(components(x)))

        self.assertEqual(components(decode(encode_common(x, SINGLE)))[smallest], 0.0)
        self.assertNotEqual(components(decode(encode_box(x, SINGLE)))[smallest], 0.0)

    def test_deterministic(self):
        first = generate_ratio_blocks(90, 64, SINGLE, seed=11)
        second = generate_ratio_blocks(90, 64, SINGLE, seed=11)
        for a, b in zip(first, second):
            np.testing.assert_array_equal(a, b)
        self.assertFalse(np.array_equal(first[0], generate_ratio_blocks(90, 64, SINGLE, seed=12)[0]))

    def test_errors(self):
        with self.assertRaises(RatioOutOfRange):
            generate_ratio_blocks(-1, 16, SINGLE, seed=0)
        # half precision tops out at exponent 30
        with self.assertRaises(RatioOutOfRange):
            generate_ratio_blocks(200, 16, HALF, seed=0)
        with self.assertRaises(ValueError):
            generate_ratio_blocks(10, 1, SINGLE, seed=0)
