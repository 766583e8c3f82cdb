"""
Sweep ranges and sweep-point dispatch.

Points run in-process by default. With ``CBFP_SWEEP_BACKEND = "celery"``
they are sent to the workers as one group. Either way the result rows come
back ordered by sweep index.
"""

import logging
import math
from dataclasses import dataclass

from celery import group
from django.conf import settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepSpec:
    start: float
    stop: float
    step: float

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError(f"sweep step must be positive, got {self.step}")
        if self.start > self.stop:
            raise ValueError(f"sweep start {self.start} is past its stop {self.stop}")

    @classmethod
    def parse(cls, text):
        parts = [float(part) for part in text.split(":")]
        if len(parts) == 1:
            return cls(parts[0], parts[0], 1.0)
        start, stop, step = parts
        return cls(start, stop, step)

    def __len__(self):
        # tolerate representation error of decimal steps
        return math.floor((self.stop - self.start) / self.step + 1e-9) + 1

    def points(self):
        return [round(self.start + index * self.step, 10) for index in range(len(self))]


def run_points(task, payloads):
    """Run ``task`` once per payload, results ordered by the payloads' ``index``."""
    backend = settings.CBFP_SWEEP_BACKEND
    logger.info(f"Running {len(payloads)} {task.name} point(s) on the {backend} backend")

    if backend == "celery":
        job = group(task.s(**payload) for payload in payloads).apply_async()
        results = job.get(timeout=settings.CBFP_SWEEP_TIMEOUT)
    elif backend == "local":
        results = [task(**payload) for payload in payloads]
    else:
        raise ValueError(f"unknown sweep backend {backend!r}")

    return sorted(results, key=lambda result: result["index"])
