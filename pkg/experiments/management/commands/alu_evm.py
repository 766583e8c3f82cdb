from experiments.base import ExperimentCommand
from experiments.serializers import AluEvmFlagsSerializer
from experiments.sweeps import run_points
from experiments.tasks import alu_evm_point
from numerics.metrics import derive_seed


class Command(ExperimentCommand):
    help = "EVM of block add/mul/conv under Common and Box encodings across an inputs-ratio sweep"
    flags_serializer = AluEvmFlagsSerializer
    header = ("ratio_db", "op", "evm_common_pct", "evm_box_pct")

    def add_experiment_arguments(self, parser):
        parser.add_argument("--op", default="mul", help="add, mul or conv")
        parser.add_argument("--ratios", default="0:200:5", help="start:stop:step in dB")
        parser.add_argument("--block-size", dest="block_size", type=int, default=64)

    def compute(self, flags):
        payloads = [
            {
                "index": index,
                "op": flags["op"],
                "ratio_db": ratio_db,
                "n_samples": flags["block_size"],
                "format_name": flags["format"],
                "seed": derive_seed(flags["seed"], index),
            }
            for index, ratio_db in enumerate(flags["ratios"].points())
        ]
        results = run_points(alu_evm_point, payloads)
        rows = [
            [r["ratio_db"], r["op"], repr(r["evm_common_pct"]), repr(r["evm_box_pct"])]
            for r in results
        ]
        return rows, [("block_size", flags["block_size"]), ("point_seeds", "derive_seed(seed, index)")]
