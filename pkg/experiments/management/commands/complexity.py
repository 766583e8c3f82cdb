from experiments.base import ExperimentCommand
from experiments.serializers import ComplexityFlagsSerializer
from experiments.sweeps import run_points
from experiments.tasks import complexity_point
from numerics.metrics import derive_seed


class Command(ExperimentCommand):
    help = "Predicted against measured mantissa and exponent costs of block operations"
    flags_serializer = ComplexityFlagsSerializer
    header = ("op", "mode", "n1", "n2", "pred_mant", "meas_mant", "pred_exp", "meas_exp")

    def add_experiment_arguments(self, parser):
        parser.add_argument("--op", default="mul", help="add, mul or conv")
        parser.add_argument("--modes", default="ieee754,common,box")
        parser.add_argument("--sizes", default="1,4,16,64", help="N list, or N1xN2 list for conv")
        parser.add_argument("--trials", type=int, default=100)

    def compute(self, flags):
        points = [(mode, size) for mode in flags["modes"] for size in flags["sizes"]]
        payloads = [
            {
                "index": index,
                "op": flags["op"],
                "mode": str(mode),
                "size": size,
                "trials": flags["trials"],
                "format_name": flags["format"],
                "seed": derive_seed(flags["seed"], index),
            }
            for index, (mode, size) in enumerate(points)
        ]
        results = run_points(complexity_point, payloads)

        metadata = [("trials", flags["trials"])]
        metadata += [
            ("discrepancy", note) for result in results for note in result["discrepancies"]
        ]
        return [result["row"] for result in results], metadata
