"""
Memory input/output and multiply-accumulate rates of the QAM chain.

Every cell is exact rational arithmetic over the chain parameters with
N_w = format wordlength, N_l = 1 lead bit, N_b = 1 box bit (Exponent Box
only), N_e = exponent width, N_g = filter order and J = bits per symbol.
IEEE754 carries no lead, box or shared exponent field.
"""

from dataclasses import dataclass
from fractions import Fraction

from numerics.choices import Encoding

RATE_CSV_HEADER = ("stage", "read_bps", "write_bps", "macs_per_s")

# rows whose read rates drop the box bit, reproduced as tabulated
ASYMMETRIC_STAGES = ("downsampler", "symbol_demapper")


@dataclass(frozen=True)
class StageRate:
    stage: str
    read_rate: Fraction
    write_rate: Fraction
    mac_rate: Fraction

    def csv_row(self):
        return [self.stage, *(_plain(value) for value in (self.read_rate, self.write_rate, self.mac_rate))]


def _plain(value):
    return str(value.numerator) if value.denominator == 1 else str(float(value))


@dataclass(frozen=True)
class RateReport:
    mode: str
    stages: tuple

    def __getitem__(self, stage):
        for record in self.stages:
            if record.stage == stage:
                return record
        raise KeyError(stage)

    def notes(self):
        return [
            f"{stage} read rate omits the box bit (N_w + N_l - N_e) while the other stages "
            f"use N_w + N_l + N_b - N_e"
            for stage in ASYMMETRIC_STAGES
        ]


def _field_widths(fmt, mode):
    if mode == Encoding.IEEE754:
        return fmt.wordlength, 0, 0, 0
    box = 1 if mode == Encoding.BOX else 0
    return fmt.wordlength, 1, box, fmt.exponent_width


def rate_model(cfg, mode=None):
    mode = Encoding(cfg.mode if mode is None else mode)
    n_w, n_l, n_b, n_e = _field_widths(cfg.format, mode)
    f_sym = Fraction(cfg.symbol_rate)
    upsample = cfg.upsample
    n_g = cfg.filter_order
    j = cfg.bits_per_symbol

    sample = n_w + n_l + n_b - n_e
    symbol_block = 2 * f_sym * sample + n_e
    sample_block = 2 * upsample * f_sym * sample + n_e
    filter_reads = (3 * upsample * n_g + 1) * (upsample * f_sym) * sample + 2 * n_e
    filter_macs = upsample**2 * n_g * f_sym

    stages = (
        StageRate("symbol_mapper", j * f_sym, symbol_block, Fraction(0)),
        StageRate("upsampler", symbol_block, sample_block, Fraction(0)),
        StageRate("pulse_shape_filter", filter_reads, sample_block, filter_macs),
        StageRate("matched_filter", filter_reads, sample_block, filter_macs),
        StageRate(
            "downsampler",
            2 * upsample * f_sym * (n_w + n_l - n_e) + n_e + (n_w + n_l + n_b),
            symbol_block,
            Fraction(0),
        ),
        StageRate(
            "symbol_demapper",
            2 * f_sym * (n_w + n_l - n_e) + n_e + Fraction(j, 2) * (n_w + n_l),
            j * f_sym,
            Fraction(0),
        ),
    )
    return RateReport(mode, stages)
