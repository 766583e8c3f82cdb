from experiments.base import ExperimentCommand
from experiments.serializers import RrcRangeFlagsSerializer
from numerics.ieee_fields import FloatFormat, truncate
from numerics.metrics import dynamic_range_db
from transceiver.pulse_shaping import rrc_taps


class Command(ExperimentCommand):
    help = "Dynamic range of the root-raised-cosine impulse response per roll-off factor"
    flags_serializer = RrcRangeFlagsSerializer
    header = ("alpha", "dynamic_range_db")

    def add_experiment_arguments(self, parser):
        parser.add_argument("--alphas", default="0.05:0.5:0.05")
        parser.add_argument("--order", type=int, default=32)
        parser.add_argument("--upsample", type=int, default=4)

    def compute(self, flags):
        fmt = FloatFormat.by_name(flags["format"])
        rows = []
        for alpha in flags["alphas"].points():
            taps = truncate(rrc_taps(alpha, flags["order"], flags["upsample"]), fmt)
            rows.append([alpha, repr(dynamic_range_db(taps))])
        return rows, [("order", flags["order"]), ("upsample", flags["upsample"])]
