"""
Shared surface of the experiment management commands.

Every command validates its flags with a DRF serializer, computes its rows,
then writes one CSV whose ``#`` header lines record the command, format and
seed. Output goes to ``--out`` through an atomic rename, or to stdout.
"""

import logging

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from experiments.output import render_csv, write_atomic
from numerics.exceptions import CbfpError

logger = logging.getLogger(__name__)


def parse_seed(value):
    # accepts decimal or 0x-prefixed seeds
    return int(value, 0)


def describe_errors(errors):
    messages = []
    for field, details in errors.items():
        details = details if isinstance(details, list) else [details]
        messages.extend(f"{field}: {detail}" for detail in details)
    return "; ".join(messages)


class ExperimentCommand(BaseCommand):
    flags_serializer = None
    header = ()

    def add_arguments(self, parser):
        parser.add_argument("--format", default=settings.CBFP_DEFAULT_FORMAT)
        parser.add_argument("--seed", type=parse_seed, default=settings.CBFP_DEFAULT_SEED)
        parser.add_argument("--out", default=None, help="CSV path, stdout when omitted")
        self.add_experiment_arguments(parser)

    def add_experiment_arguments(self, parser):
        pass

    @property
    def command_name(self):
        return type(self).__module__.rsplit(".", 1)[-1]

    def compute(self, flags):
        """Return (rows, extra metadata pairs)."""
        raise NotImplementedError

    def handle(self, *args, **options):
        serializer = self.flags_serializer(
            data={name: options.get(name) for name in self.flags_serializer().fields}
        )
        if not serializer.is_valid():
            raise CommandError(f"Invalid flags: {describe_errors(serializer.errors)}")
        flags = serializer.validated_data

        try:
            rows, metadata = self.compute(flags)
        except (CbfpError, OSError) as exc:
            raise CommandError(f"{self.command_name} failed: {exc}") from exc

        text = render_csv(
            self.header,
            rows,
            [("command", self.command_name), ("format", flags["format"]), ("seed", flags["seed"])]
            + list(metadata),
        )
        if flags.get("out"):
            write_atomic(flags["out"], text)
        else:
            self.stdout.write(text, ending="")
