from fractions import Fraction

from django.test import SimpleTestCase

from numerics.choices import Encoding
from numerics.ieee_fields import HALF
from transceiver.rates import RATE_CSV_HEADER, rate_model
from transceiver.serializers import build_config

# single precision, 1024-QAM, L = 4, f_sym = 2400, N_g = 32
BOX_RATES = {
    "symbol_mapper": (24000, 124808, 0),
    "upsampler": (124808, 499208, 0),
    "pulse_shape_filter": (96096016, 499208, 1228800),
    "matched_filter": (96096016, 499208, 1228800),
    "downsampler": (480042, 124808, 0),
    "symbol_demapper": (120173, 24000, 0),
}


class RateModelTestCase(SimpleTestCase):
    def setUp(self):
        self.cfg = build_config(format="single")

    def test_box_defaults(self):
        report = rate_model(self.cfg, Encoding.BOX)
        self.assertEqual([record.stage for record in report.stages], list(BOX_RATES))
        for stage, expected in BOX_RATES.items():
            record = report[stage]
            with self.subTest(stage=stage):
                self.assertEqual((record.read_rate, record.write_rate, record.mac_rate), expected)

    def test_common_drops_the_box_bit(self):
        report = rate_model(self.cfg, Encoding.COMMON)
        # 2 * 2400 * 25 + 8
        self.assertEqual(report["symbol_mapper"].write_rate, 120008)
        self.assertEqual(report["pulse_shape_filter"].mac_rate, 1228800)
        box = rate_model(self.cfg, Encoding.BOX)
        self.assertLess(report["upsampler"].write_rate, box["upsampler"].write_rate)

    def test_ieee754_carries_plain_words(self):
        report = rate_model(self.cfg, Encoding.IEEE754)
        self.assertEqual(report["symbol_mapper"].write_rate, 2 * 2400 * 32)
        self.assertEqual(report["upsampler"].write_rate, 2 * 4 * 2400 * 32)

    def test_mode_defaults_to_the_config(self):
        self.assertEqual(rate_model(self.cfg.with_mode("box")).mode, Encoding.BOX)

    def test_half_precision(self):
        cfg = build_config(format=HALF)
        # N_w + N_l + N_b - N_e = 16 + 1 + 1 - 5
        self.assertEqual(rate_model(cfg, Encoding.BOX)["symbol_mapper"].write_rate, 2 * 2400 * 13 + 5)

    def test_rates_stay_exact(self):
        cfg = build_config(format="single", symbol_rate=3, constellation_order=16)
        record = rate_model(cfg, Encoding.BOX)["symbol_demapper"]
        self.assertIsInstance(record.read_rate, Fraction)
        # J / 2 * (N_w + N_l) = 2 * 33
        self.assertEqual(record.read_rate, 2 * 3 * 25 + 8 + 66)

    def test_csv_rows_and_notes(self):
        report = rate_model(self.cfg, Encoding.BOX)
        self.assertEqual(len(RATE_CSV_HEADER), 4)
        self.assertEqual(
            report["pulse_shape_filter"].csv_row(),
            ["pulse_shape_filter", "96096016", "499208", "1228800"],
        )
        self.assertEqual(len(report.notes()), 2)
        with self.assertRaises(KeyError):
            report["equalizer"]
