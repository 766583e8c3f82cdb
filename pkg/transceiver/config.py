"""
Parameters of the QAM transmitter/receiver chain.

Files are plain ``key=value`` lines, ``#`` starts a comment, keys are the
TransceiverConfig field names. ``transceiver.serializers.load_config`` turns
one into a validated TransceiverConfig.
"""

import math
from dataclasses import dataclass, replace

from numerics.choices import Encoding
from numerics.exceptions import ConfigFileError, InvalidFilterOrder, InvalidRolloff
from numerics.ieee_fields import FloatFormat


@dataclass(frozen=True)
class TransceiverConfig:
    constellation_order: int
    upsample: int
    symbol_rate: int
    filter_order: int
    rolloff: float
    snr_db: float
    seed: int
    format: FloatFormat
    mode: str
    n_symbols: int
    block_size: int | None = None

    def __post_init__(self):
        if not 0 < self.rolloff < 1:
            raise InvalidRolloff(f"roll-off {self.rolloff} outside (0, 1)")
        if self.filter_order < 2 or self.filter_order % 2:
            raise InvalidFilterOrder(f"filter order {self.filter_order} is not even and positive")
        if self.block_size is None:
            object.__setattr__(self, "block_size", self.upsample * self.symbol_rate)
        object.__setattr__(self, "mode", Encoding(self.mode))

    @property
    def bits_per_symbol(self):
        return int(math.log2(self.constellation_order))

    @property
    def n_taps(self):
        return self.filter_order + 1

    @property
    def noiseless(self):
        return math.isinf(self.snr_db)

    def with_mode(self, mode):
        return replace(self, mode=Encoding(mode))

    def with_snr(self, snr_db):
        return replace(self, snr_db=snr_db)


def parse_key_values(text):
    """
    ``{key: (value, line number)}`` of a key=value document.
    """
    entries = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigFileError(f"line {number}: expected key=value, got {raw.strip()!r}")

        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigFileError(f"line {number}: missing key")
        if key in entries:
            raise ConfigFileError(
                f"line {number}: {key} already set on line {entries[key][1]}"
            )
        entries[key] = (value, number)
    return entries
