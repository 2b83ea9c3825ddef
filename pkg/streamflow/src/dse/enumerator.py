"""Exhaustive design-space enumeration, used as the oracle for the annealer."""

import logging
import math
from itertools import combinations, product
from typing import Iterator

from streamflow.src.dse.evaluation import evaluate_many
from streamflow.src.dse.exceptions import NoFeasibleDesign, SpaceTooLarge
from streamflow.src.dse.schemas import EnumerationCaps, Objective
from streamflow.src.model_ir.schemas import NetworkGraph
from streamflow.src.perf_model.profile import profile_network
from streamflow.src.perf_model.schemas import DeviceDescriptor, PerfReport
from streamflow.src.sdf.schemas import StageConfig
from streamflow.src.transforms.enums import ExecutionMode
from streamflow.src.transforms.operations import partitions_from_cuts
from streamflow.src.transforms.schemas import DesignPoint

logger = logging.getLogger(__name__)


def cut_sets(n_layers: int, max_partitions: int) -> list[tuple[int, ...]]:
    """Every cut-point set giving at most ``max_partitions`` partitions, shortest first."""
    most = min(max_partitions, n_layers) - 1
    return [cuts for size in range(most + 1) for cuts in combinations(range(1, n_layers), size)]


def modes_for(cuts: tuple[int, ...]) -> tuple[ExecutionMode, ...]:
    # both modes coincide for a single partition
    if not cuts:
        return (ExecutionMode.THROUGHPUT,)
    return (ExecutionMode.THROUGHPUT, ExecutionMode.LATENCY)


def folding_options(network: NetworkGraph) -> list[tuple[StageConfig, ...]]:
    """Per layer, every (coarse, fine) pair drawn from the divisors of the caps."""
    return [
        tuple(StageConfig(coarse=c, fine=f) for c, f in product(p.coarse_options, p.fine_options))
        for p in profile_network(network)
    ]


def space_size(network: NetworkGraph, caps: EnumerationCaps | None = None) -> int:
    caps = caps or EnumerationCaps()
    foldings = math.prod(len(options) for options in folding_options(network))
    structures = sum(len(modes_for(cuts)) for cuts in cut_sets(network.n_layers, caps.max_partitions))
    return foldings * structures


def _designs(network: NetworkGraph, caps: EnumerationCaps) -> Iterator[DesignPoint]:
    options = folding_options(network)
    for cuts in cut_sets(network.n_layers, caps.max_partitions):
        partitions = partitions_from_cuts(network.n_layers, cuts)
        for mode in modes_for(cuts):
            for configs in product(*options):
                yield DesignPoint(stage_configs=configs, mode=mode, partitions=partitions)


def enumerate_designs(
    network: NetworkGraph,
    device: DeviceDescriptor,
    caps: EnumerationCaps | None = None,
    batch: int = 1,
) -> Iterator[tuple[DesignPoint, PerfReport]]:
    """Stream every feasible design in (cut set, mode, folding) order.

    The size check runs eagerly, before the first design is yielded.
    """
    caps = caps or EnumerationCaps()
    size = space_size(network, caps)
    if size > caps.max_space:
        raise SpaceTooLarge(size, caps.max_space)
    logger.info("Enumerating %d design points of %s", size, network.name)
    return _feasible(network, device, caps, batch)


def _feasible(
    network: NetworkGraph, device: DeviceDescriptor, caps: EnumerationCaps, batch: int
) -> Iterator[tuple[DesignPoint, PerfReport]]:
    for report in evaluate_many(_designs(network, caps), network, device, batch):
        if report.feasible:
            yield report.design, report


def exhaustive_optimum(
    network: NetworkGraph,
    device: DeviceDescriptor,
    objective: Objective,
    caps: EnumerationCaps | None = None,
) -> tuple[DesignPoint, PerfReport]:
    """Lowest-cost feasible design, ties going to the smaller design key."""
    best: tuple[float, tuple, DesignPoint, PerfReport] | None = None
    for design, report in enumerate_designs(network, device, caps, objective.batch):
        key = (objective.cost(report), design.sort_key())
        if best is None or key < best[:2]:
            best = (*key, design, report)
    if best is None:
        raise NoFeasibleDesign(f"no design of {network.name} fits device {device.name}")
    return best[2], best[3]
