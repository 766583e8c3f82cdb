import csv
import io
import logging

from numerics.blockfile import replace_bytes

logger = logging.getLogger(__name__)


def render_csv(header, rows, metadata=()):
    """CSV text with ``# key: value`` metadata lines ahead of the header row."""
    buffer = io.StringIO()
    for key, value in metadata:
        buffer.write(f"# {key}: {value}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def write_atomic(path, text):
    replace_bytes(path, text.encode("utf-8"))
    logger.info(f"Wrote {path}")
