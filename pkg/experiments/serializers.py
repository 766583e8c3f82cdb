from rest_framework import serializers

from experiments.sweeps import SweepSpec
from experiments.validators import validate_mode_list, validate_size_list, validate_sweep
from numerics.choices import Encoding, Operation
from numerics.ieee_fields import FORMATS
from transceiver.validators import validate_filter_order


def _sweep(value):
    try:
        return SweepSpec.parse(value)
    except ValueError as exc:
        raise serializers.ValidationError(str(exc)) from exc


class CommonFlagsSerializer(serializers.Serializer):
    format = serializers.ChoiceField(choices=list(FORMATS))
    seed = serializers.IntegerField(min_value=0, max_value=2**64 - 1)
    out = serializers.CharField(required=False, allow_null=True)


class AluEvmFlagsSerializer(CommonFlagsSerializer):
    op = serializers.ChoiceField(choices=Operation.choices)
    ratios = serializers.CharField(validators=[validate_sweep])
    block_size = serializers.IntegerField(min_value=2)

    def validate_ratios(self, value):
        sweep = _sweep(value)
        if sweep.start < 0:
            raise serializers.ValidationError("Inputs ratios must be non-negative.")
        return sweep


class QamFlagsSerializer(CommonFlagsSerializer):
    config = serializers.CharField(required=False, allow_null=True)
    snr = serializers.CharField(validators=[validate_sweep])
    modes = serializers.CharField(validators=[validate_mode_list])
    n_symbols = serializers.IntegerField(min_value=17, required=False, allow_null=True)

    def validate_snr(self, value):
        return _sweep(value)

    def validate_modes(self, value):
        return [Encoding(mode) for mode in value.replace(" ", "").split(",")]


class ComplexityFlagsSerializer(CommonFlagsSerializer):
    op = serializers.ChoiceField(choices=Operation.choices)
    modes = serializers.CharField(validators=[validate_mode_list])
    sizes = serializers.CharField(validators=[validate_size_list])
    trials = serializers.IntegerField(min_value=1, max_value=100_000)

    def validate_modes(self, value):
        return [Encoding(mode) for mode in value.replace(" ", "").split(",")]

    def validate_sizes(self, value):
        sizes = []
        for item in value.replace(" ", "").split(","):
            dims = tuple(int(dim) for dim in item.split("x"))
            if min(dims) < 1:
                raise serializers.ValidationError(f"{item} holds a zero size.")
            sizes.append(dims)
        return sizes

    def validate(self, data):
        dims = {len(size) for size in data["sizes"]}
        if data["op"] == Operation.CONV and dims != {2}:
            raise serializers.ValidationError("Convolution sizes are written N1xN2.")
        if data["op"] != Operation.CONV and dims != {1}:
            raise serializers.ValidationError("Addition and multiplication take one size N.")
        if data["op"] != Operation.CONV:
            data["sizes"] = [n for (n,) in data["sizes"]]
        return data


class RrcRangeFlagsSerializer(CommonFlagsSerializer):
    alphas = serializers.CharField(validators=[validate_sweep])
    order = serializers.IntegerField(validators=[validate_filter_order])
    upsample = serializers.IntegerField(min_value=1)

    def validate_alphas(self, value):
        sweep = _sweep(value)
        if not 0 < sweep.start <= sweep.stop < 1:
            raise serializers.ValidationError("Roll-off factors must lie in (0, 1).")
        return sweep


class WordlengthFlagsSerializer(CommonFlagsSerializer):
    block_sizes = serializers.CharField(validators=[validate_size_list])

    def validate_block_sizes(self, value):
        if "x" in value:
            raise serializers.ValidationError("Block sizes are plain integers.")
        sizes = [int(item) for item in value.replace(" ", "").split(",")]
        if min(sizes) < 1:
            raise serializers.ValidationError("Block sizes must be positive.")
        return sizes


class RatesFlagsSerializer(CommonFlagsSerializer):
    config = serializers.CharField(required=False, allow_null=True)
    mode = serializers.ChoiceField(choices=Encoding.choices)

