"""
End-to-end baseband QAM chain:

    mapper -> upsample -> pulse shape -> AWGN -> matched filter -> downsample -> demapper

Every run is paired with a reference run of the same configuration in scalar
IEEE-754 arithmetic. Both share the transmitted bits and the noise sequence,
so EVM between them isolates the arithmetic.
"""

import logging
from dataclasses import dataclass

import numpy as np

from numerics.block_alu import OpCostCounters
from numerics.choices import Encoding
from numerics.ieee_fields import truncate
from numerics.metrics import derive_seed, evm_percent
from transceiver.channel import awgn
from transceiver.pulse_shaping import block_fir, rrc_taps
from transceiver.qam import demap_symbols, downsample, map_symbols, upsample

logger = logging.getLogger(__name__)

# symbols at each end excluded from EVM
EDGE_SYMBOLS = 8

BITS_STREAM = 0
NOISE_STREAM = 1


@dataclass(frozen=True)
class _Pass:
    rx_symbols: np.ndarray
    signal_power: float
    pulse_shape_counters: OpCostCounters
    matched_filter_counters: OpCostCounters


@dataclass(frozen=True)
class ChainResult:
    mode: str
    tx_bits: np.ndarray
    rx_bits: np.ndarray
    tx_symbols: np.ndarray
    rx_symbols: np.ndarray
    reference_rx_symbols: np.ndarray
    evm_vs_ieee: object
    evm_vs_tx: object
    pulse_shape_counters: OpCostCounters
    matched_filter_counters: OpCostCounters

    @property
    def bit_errors(self):
        return int(np.count_nonzero(self.tx_bits != self.rx_bits))


def _trim(symbols):
    return symbols[EDGE_SYMBOLS : symbols.size - EDGE_SYMBOLS]


def _run(cfg, mode, tx_symbols, taps, noise_seed, signal_power=None):
    fmt = cfg.format
    pulse_counters, matched_counters = OpCostCounters(), OpCostCounters()

    upsampled = upsample(tx_symbols, cfg.upsample)
    shaped = block_fir(upsampled, taps, fmt, mode, cfg.block_size, pulse_counters)
    if signal_power is None:
        signal_power = float(np.mean(np.abs(shaped) ** 2))

    # the front end hands the receiver samples in the working format
    received = truncate(awgn(shaped, cfg.snr_db, noise_seed, signal_power), fmt)
    filtered = block_fir(received, taps, fmt, mode, cfg.block_size, matched_counters)

    rx_symbols = downsample(filtered, cfg.upsample, cfg.filter_order)[: tx_symbols.size]
    return _Pass(rx_symbols, signal_power, pulse_counters, matched_counters)


def run_chain(cfg):
    fmt = cfg.format
    bits = np.random.default_rng(derive_seed(cfg.seed, BITS_STREAM)).integers(
        0, 2, size=cfg.n_symbols * cfg.bits_per_symbol, dtype=np.uint8
    )
    noise_seed = derive_seed(cfg.seed, NOISE_STREAM)
    tx_symbols = truncate(map_symbols(bits, cfg.constellation_order), fmt)
    taps = truncate(rrc_taps(cfg.rolloff, cfg.filter_order, cfg.upsample), fmt)

    reference = _run(cfg, Encoding.IEEE754, tx_symbols, taps, noise_seed)
    if cfg.mode == Encoding.IEEE754:
        run = reference
    else:
        run = _run(cfg, cfg.mode, tx_symbols, taps, noise_seed, reference.signal_power)

    result = ChainResult(
        mode=cfg.mode,
        tx_bits=bits,
        rx_bits=demap_symbols(run.rx_symbols, cfg.constellation_order),
        tx_symbols=tx_symbols,
        rx_symbols=run.rx_symbols,
        reference_rx_symbols=reference.rx_symbols,
        evm_vs_ieee=evm_percent(_trim(reference.rx_symbols), _trim(run.rx_symbols)),
        evm_vs_tx=evm_percent(_trim(tx_symbols), _trim(run.rx_symbols)),
        pulse_shape_counters=run.pulse_shape_counters,
        matched_filter_counters=run.matched_filter_counters,
    )
    logger.info(
        f"QAM chain {cfg.mode} at {cfg.snr_db} dB: EVM {result.evm_vs_tx.evm_percent:.4f}% "
        f"vs transmitted, {result.evm_vs_ieee.evm_percent:.2e}% vs IEEE-754"
    )
    return result
