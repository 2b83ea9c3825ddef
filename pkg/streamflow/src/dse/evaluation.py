"""Order-preserving parallel evaluation of design points."""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from itertools import islice
from typing import Iterable, Iterator

from streamflow.src.config_package import settings
from streamflow.src.model_ir.schemas import NetworkGraph
from streamflow.src.perf_model.estimators import evaluate_design
from streamflow.src.perf_model.schemas import DeviceDescriptor, PerfReport
from streamflow.src.transforms.schemas import DesignPoint

logger = logging.getLogger(__name__)


def worker_count() -> int:
    return settings.STREAMFLOW_THREADS or os.cpu_count() or 1


def evaluate_many(
    designs: Iterable[DesignPoint],
    network: NetworkGraph,
    device: DeviceDescriptor,
    batch: int = 1,
) -> Iterator[PerfReport]:
    """Evaluate ``designs`` lazily, chunk by chunk, yielding reports in input order."""
    workers = worker_count()
    iterator = iter(designs)

    def evaluate(design: DesignPoint) -> PerfReport:
        return evaluate_design(design, network, device, batch)

    if workers == 1:
        yield from map(evaluate, iterator)
        return

    with ThreadPoolExecutor(max_workers=workers) as pool:
        while chunk := list(islice(iterator, settings.EVALUATION_CHUNK)):
            yield from pool.map(evaluate, chunk)
