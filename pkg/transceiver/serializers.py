from django.conf import settings
from rest_framework import serializers

from numerics.choices import Encoding
from numerics.exceptions import ConfigFileError
from numerics.ieee_fields import FORMATS, FloatFormat
from transceiver.config import TransceiverConfig, parse_key_values
from transceiver.validators import (
    parse_snr_db,
    validate_constellation_order,
    validate_filter_order,
    validate_rolloff,
)


class SnrField(serializers.Field):
    """Signal-to-noise ratio in dB, ``inf`` disables the noise."""

    def to_internal_value(self, data):
        try:
            return parse_snr_db(data)
        except Exception as exc:
            raise serializers.ValidationError(getattr(exc, "messages", [str(exc)])) from exc

    def to_representation(self, value):
        return "inf" if value == float("inf") else value


class TransceiverConfigSerializer(serializers.Serializer):
    constellation_order = serializers.IntegerField(validators=[validate_constellation_order])
    upsample = serializers.IntegerField(min_value=1)
    symbol_rate = serializers.IntegerField(min_value=1)
    filter_order = serializers.IntegerField(validators=[validate_filter_order])
    rolloff = serializers.FloatField(validators=[validate_rolloff])
    snr_db = SnrField()
    seed = serializers.IntegerField(min_value=0, max_value=2**64 - 1, required=False)
    block_size = serializers.IntegerField(min_value=1, required=False, allow_null=True)
    format = serializers.ChoiceField(choices=list(FORMATS), required=False)
    mode = serializers.ChoiceField(choices=Encoding.choices, required=False)
    # the first and last 8 symbols are excluded from EVM
    n_symbols = serializers.IntegerField(min_value=17)

    def to_internal_value(self, data):
        merged = {**settings.CBFP_TRANSCEIVER_DEFAULTS, **data}
        return super().to_internal_value(merged)

    def create(self, validated_data):
        data = dict(validated_data)
        data.setdefault("seed", settings.CBFP_DEFAULT_SEED)
        data["format"] = FloatFormat.by_name(data.get("format", settings.CBFP_DEFAULT_FORMAT))
        data["mode"] = Encoding(data.get("mode", Encoding.IEEE754))
        return TransceiverConfig(**data)


def _first_message(detail):
    if isinstance(detail, (list, tuple)):
        return _first_message(detail[0])
    if isinstance(detail, dict):
        return _first_message(next(iter(detail.values())))
    return str(detail)


def build_config(**values):
    """Validated TransceiverConfig from keyword values over the configured defaults."""
    return parse_config("", **values)


def parse_config(text, **overrides):
    entries = parse_key_values(text)
    known = set(TransceiverConfigSerializer().fields)
    for key, (_, number) in entries.items():
        if key not in known:
            raise ConfigFileError(f"line {number}: unknown key {key!r}")

    data = {key: value for key, (value, _) in entries.items()}
    data.update(
        {
            key: value.name if isinstance(value, FloatFormat) else value
            for key, value in overrides.items()
            if value is not None
        }
    )
    serializer = TransceiverConfigSerializer(data=data)
    if not serializer.is_valid():
        key, detail = next(iter(serializer.errors.items()))
        where = f"line {entries[key][1]}: " if key in entries else ""
        raise ConfigFileError(f"{where}{key}: {_first_message(detail)}")
    return serializer.save()


def load_config(path, **overrides):
    with open(path, encoding="utf-8") as stream:
        return parse_config(stream.read(), **overrides)
