from experiments.base import ExperimentCommand
from experiments.serializers import WordlengthFlagsSerializer
from numerics.cbfp_codec import wordlength_bits
from numerics.choices import Encoding
from numerics.ieee_fields import FloatFormat


class Command(ExperimentCommand):
    help = "Bits needed to store N_v complex samples per encoding"
    flags_serializer = WordlengthFlagsSerializer
    header = ("n_samples", "ieee754_bits", "common_bits", "box_bits")

    def add_experiment_arguments(self, parser):
        parser.add_argument("--block-sizes", dest="block_sizes", default="25")

    def compute(self, flags):
        fmt = FloatFormat.by_name(flags["format"])
        rows = [
            [n, *(wordlength_bits(mode, n, fmt) for mode in Encoding.values)]
            for n in flags["block_sizes"]
        ]
        return rows, []
