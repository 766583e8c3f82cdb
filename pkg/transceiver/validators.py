import math

from django.core.exceptions import ValidationError


def validate_constellation_order(value):
    # square QAM only: an even number of bits per symbol
    bits = int(value).bit_length() - 1
    if value < 4 or value != 1 << bits or bits % 2:
        raise ValidationError(f"{value} is not a square QAM constellation order")


def validate_filter_order(value):
    if value < 2 or value % 2:
        raise ValidationError(f"{value} is not an even, positive filter order")


def validate_rolloff(value):
    if not 0 < value < 1:
        raise ValidationError(f"{value} is not a roll-off factor in (0, 1)")


def parse_snr_db(value):
    text = str(value).strip().lower()
    if text in ("inf", "+inf", "infinity", "none", "off"):
        return math.inf
    try:
        snr = float(text)
    except ValueError:
        raise ValidationError(f"{value} is not an SNR in dB") from None
    if math.isnan(snr) or snr == -math.inf:
        raise ValidationError(f"{value} is not an SNR in dB")
    return snr
