import logging

from celery import shared_task

from numerics.block_alu import audit, evaluate
from numerics.choices import Encoding
from numerics.ieee_fields import FloatFormat
from numerics.metrics import evm_percent, generate_ratio_blocks
from transceiver.chain import run_chain
from transceiver.serializers import build_config

logger = logging.getLogger(__name__)

# numeric errors are deterministic, only lost workers and brokers are retried
TRANSIENT_ERRORS = (ConnectionError, TimeoutError)


@shared_task(
    bind=True,
    autoretry_for=TRANSIENT_ERRORS,
    retry_backoff=True,
    retry_kwargs={"max_retries": 3},
)
def alu_evm_point(self, index, op, ratio_db, n_samples, format_name, seed):
    fmt = FloatFormat.by_name(format_name)
    x, y = generate_ratio_blocks(ratio_db, n_samples, fmt, seed)

    # reference: 64-bit arithmetic truncated to the operand format
    reference = evaluate(op, Encoding.IEEE754, x, y, fmt)
    common = evaluate(op, Encoding.COMMON, x, y, fmt)
    box = evaluate(op, Encoding.BOX, x, y, fmt)

    result = {
        "index": index,
        "ratio_db": ratio_db,
        "op": op,
        "evm_common_pct": evm_percent(reference, common).evm_percent,
        "evm_box_pct": evm_percent(reference, box).evm_percent,
    }
    logger.info(
        f"{op} at {ratio_db} dB: EVM common {result['evm_common_pct']:.3e}%, "
        f"box {result['evm_box_pct']:.3e}%"
    )
    return result


@shared_task(
    bind=True,
    autoretry_for=TRANSIENT_ERRORS,
    retry_backoff=True,
    retry_kwargs={"max_retries": 3},
)
def qam_point(self, index, config, snr_db, mode):
    cfg = build_config(**{**config, "snr_db": snr_db, "mode": mode})
    result = run_chain(cfg)
    return {
        "index": index,
        "snr_db": snr_db,
        "mode": mode,
        "evm_pct": result.evm_vs_tx.evm_percent,
        "evm_vs_ieee_pct": result.evm_vs_ieee.evm_percent,
        "seed": cfg.seed,
    }


@shared_task(
    bind=True,
    autoretry_for=TRANSIENT_ERRORS,
    retry_backoff=True,
    retry_kwargs={"max_retries": 3},
)
def complexity_point(self, index, op, mode, size, trials, format_name, seed):
    (row,) = audit(op, mode, [size], trials, seed, FloatFormat.by_name(format_name))
    logger.info(f"Audited {op} {mode} ({row.n1},{row.n2}) over {trials} trial(s)")
    return {"index": index, "row": row.csv_row(), "discrepancies": row.discrepancies()}
