from django.conf import settings

from experiments.base import ExperimentCommand
from experiments.serializers import QamFlagsSerializer
from experiments.sweeps import run_points
from experiments.tasks import qam_point
from transceiver.serializers import TransceiverConfigSerializer, build_config, load_config


class Command(ExperimentCommand):
    help = "EVM of the QAM transceiver chain per encoding across an SNR sweep"
    flags_serializer = QamFlagsSerializer
    header = ("snr_db", "mode", "evm_pct")

    def add_experiment_arguments(self, parser):
        parser.add_argument("--config", default=None, help="key=value transceiver configuration")
        parser.add_argument("--snr", default="10:40:5", help="start:stop:step in dB")
        parser.add_argument("--modes", default="ieee754,common,box")
        parser.add_argument("--n-symbols", dest="n_symbols", type=int, default=None)

    def compute(self, flags):
        overrides = {"format": flags["format"], "seed": flags["seed"], "n_symbols": flags["n_symbols"]}
        if flags.get("config"):
            cfg = load_config(flags["config"], **overrides)
        else:
            cfg = build_config(**overrides)
        config = dict(TransceiverConfigSerializer(cfg).data)

        points = [(snr, mode) for snr in flags["snr"].points() for mode in flags["modes"]]
        payloads = [
            {"index": index, "config": config, "snr_db": snr, "mode": str(mode)}
            for index, (snr, mode) in enumerate(points)
        ]
        results = run_points(qam_point, payloads)

        rows = [[r["snr_db"], r["mode"], repr(r["evm_pct"])] for r in results]
        metadata = [
            ("modes", ",".join(str(mode) for mode in flags["modes"])),
            ("chain_seed", f"{cfg.seed} shared by every mode"),
            ("n_symbols", cfg.n_symbols),
            ("sweep_backend", settings.CBFP_SWEEP_BACKEND),
        ]
        return rows, metadata
