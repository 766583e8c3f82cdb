"""
Binary block file format.

A 16-byte header (magic ``CBFP``, format tag, mode tag, N_v as little-endian
uint32, zero padding) followed by the packed fields: E first, then each
component in (re, im) order as S, L, X (Box only), M, most significant bit
first, zero-padded to a byte boundary.
"""

import logging
import os
import struct
import tempfile
from pathlib import Path

import numpy as np

from numerics.cbfp_codec import CbfpBlock, wordlength_bits
from numerics.choices import Encoding
from numerics.exceptions import BlockFileError
from numerics.ieee_fields import FORMAT_TAGS, FORMATS

logger = logging.getLogger(__name__)

MAGIC = b"CBFP"
HEADER = struct.Struct("<4sBBI6x")
MODE_TAGS = {Encoding.COMMON: 0, Encoding.BOX: 1}


def _to_bits(values, width):
    values = np.asarray(values, dtype=np.int64).reshape(-1, 1)
    return ((values >> np.arange(width - 1, -1, -1)) & 1).astype(np.uint8)


def _from_bits(bits):
    weights = np.int64(1) << np.arange(bits.shape[-1] - 1, -1, -1, dtype=np.int64)
    return (bits.astype(np.int64) * weights).sum(axis=-1)


def _fields(block):
    fields = [(block.signs, 1), (block.leads, 1)]
    if block.mode == Encoding.BOX:
        fields.append((block.box_shifts, 1))
    fields.append((block.mantissas, block.format.mantissa_width))
    return fields


def pack_block(block):
    fmt = block.format
    records = np.hstack([_to_bits(values, width) for values, width in _fields(block)])
    bits = np.concatenate(
        [_to_bits(block.common_exponent, fmt.exponent_width).ravel(), records.ravel()]
    )
    header = HEADER.pack(MAGIC, fmt.tag, MODE_TAGS[block.mode], block.n_samples)
    return header + np.packbits(bits).tobytes()


def unpack_block(data):
    if len(data) < HEADER.size:
        raise BlockFileError(f"{len(data)} bytes is shorter than the header")
    magic, format_tag, mode_tag, n_samples = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise BlockFileError(f"bad magic {magic!r}")

    formats = {tag: FORMATS[name] for name, tag in FORMAT_TAGS.items()}
    modes = {tag: mode for mode, tag in MODE_TAGS.items()}
    if format_tag not in formats or mode_tag not in modes:
        raise BlockFileError(f"unknown format/mode tag ({format_tag}, {mode_tag})")
    if n_samples < 1:
        raise BlockFileError("block size must be positive")
    fmt, mode = formats[format_tag], modes[mode_tag]

    n_bits = wordlength_bits(mode, n_samples, fmt)
    payload = np.frombuffer(data, dtype=np.uint8, offset=HEADER.size)
    if payload.size != (n_bits + 7) // 8:
        raise BlockFileError(
            f"payload holds {payload.size} bytes, {fmt.name}/{mode} of {n_samples} "
            f"samples needs {(n_bits + 7) // 8}"
        )
    bits = np.unpackbits(payload)
    if bits[n_bits:].any():
        raise BlockFileError("non-zero padding after the last record")

    common = int(_from_bits(bits[: fmt.exponent_width]))
    record = 3 + fmt.mantissa_width if mode == Encoding.BOX else 2 + fmt.mantissa_width
    records = bits[fmt.exponent_width : n_bits].reshape(2 * n_samples, record)
    box = records[:, 2] if mode == Encoding.BOX else np.zeros(2 * n_samples, dtype=np.uint8)
    try:
        return CbfpBlock(
            fmt,
            mode,
            common,
            signs=records[:, 0],
            leads=records[:, 1],
            box_shifts=box,
            mantissas=_from_bits(records[:, record - fmt.mantissa_width :]),
        )
    except (ValueError, ArithmeticError) as exc:
        raise BlockFileError(f"invalid block record: {exc}") from exc


def replace_bytes(path, data):
    """Replace ``path`` with ``data`` in one rename, never leaving a partial file."""
    path = Path(path)
    handle, temporary = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(handle, "wb") as stream:
            stream.write(data)
        os.replace(temporary, path)
    except BaseException:
        Path(temporary).unlink(missing_ok=True)
        raise


def write_block(path, block):
    replace_bytes(path, pack_block(block))
    logger.info(f"Wrote {block!r} to {path}")


def read_block(path):
    return unpack_block(Path(path).read_bytes())
