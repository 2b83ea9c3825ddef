"""Discrete-event pipeline oracle for the analytic makespan formula.

Stages are simpy processes joined by depth-1 stores: a stage that finishes an
item blocks until the next stage has taken the previous one.
"""

import logging
from typing import Sequence

import simpy

from streamflow.src.config_package import settings
from streamflow.src.model_ir.schemas import NetworkGraph
from streamflow.src.perf_model.cycles import check_design, design_cycles
from streamflow.src.perf_model.exceptions import SimulationError
from streamflow.src.perf_model.schemas import DeviceDescriptor
from streamflow.src.transforms.schemas import DesignPoint

logger = logging.getLogger(__name__)


def _check_batch(batch: int) -> None:
    if not 1 <= batch <= settings.SIMULATION_MAX_BATCH:
        raise SimulationError(f"batch must be in [1, {settings.SIMULATION_MAX_BATCH}], got {batch}")


def simulate_makespan(service_times: Sequence[int], batch: int) -> int:
    """Cycles until the last stage finishes item ``batch``."""
    _check_batch(batch)
    if not service_times or any(t <= 0 for t in service_times):
        raise SimulationError("service times must be a non-empty sequence of positive integers")

    env = simpy.Environment()
    last = len(service_times) - 1
    buffers = [simpy.Store(env, capacity=1) for _ in range(last)]
    finished = {"at": 0}

    def stage(index: int, service: int):
        for item in range(batch):
            if index > 0:
                yield buffers[index - 1].get()
            yield env.timeout(service)
            if index < last:
                yield buffers[index].put(item)
        if index == last:
            finished["at"] = env.now

    for index, service in enumerate(service_times):
        env.process(stage(index, int(service)))
    env.run()
    return int(finished["at"])


def simulate_pipeline(design: DesignPoint, network: NetworkGraph, device: DeviceDescriptor, batch: int) -> int:
    """Simulated makespan in cycles of a single-partition design.

    ``device`` is accepted for symmetry with the estimators; cycle counts do not
    depend on it.
    """
    if design.partition_count != 1:
        raise SimulationError(f"simulation covers single-partition designs, got {design.partition_count}")
    check_design(design, network)
    cycles = design_cycles(design, network)
    makespan = simulate_makespan(cycles, batch)
    logger.debug("Simulated %d inputs through %d stages on %s: %d cycles", batch, len(cycles), device.name, makespan)
    return makespan
