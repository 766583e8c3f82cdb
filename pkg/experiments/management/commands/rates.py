from experiments.base import ExperimentCommand
from experiments.serializers import RatesFlagsSerializer
from transceiver.rates import RATE_CSV_HEADER, rate_model
from transceiver.serializers import build_config, load_config


class Command(ExperimentCommand):
    help = "Memory read/write and MAC rates of every QAM chain stage"
    flags_serializer = RatesFlagsSerializer
    header = RATE_CSV_HEADER

    def add_experiment_arguments(self, parser):
        parser.add_argument("--config", default=None, help="key=value transceiver configuration")
        parser.add_argument("--mode", default="box")

    def compute(self, flags):
        overrides = {"format": flags["format"], "seed": flags["seed"], "mode": flags["mode"]}
        if flags.get("config"):
            cfg = load_config(flags["config"], **overrides)
        else:
            cfg = build_config(**overrides)

        report = rate_model(cfg)
        metadata = [("mode", report.mode)] + [("note", note) for note in report.notes()]
        return [stage.csv_row() for stage in report.stages], metadata
