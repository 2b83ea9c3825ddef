"""Algebraic transforms over design points.

Every transform returns a new DesignPoint and leaves its input untouched.
"""

import logging
from typing import Sequence

from streamflow.src.model_ir.schemas import NetworkGraph
from streamflow.src.model_ir.shapes import infer_shapes
from streamflow.src.sdf.exceptions import FoldingOutOfRange
from streamflow.src.sdf.folding import coarse_cap, fine_cap
from streamflow.src.sdf.schemas import StageConfig
from streamflow.src.transforms.enums import ExecutionMode
from streamflow.src.transforms.exceptions import InvalidCutPoint, ModeMismatch, UnknownLayer
from streamflow.src.transforms.schemas import DesignPoint

logger = logging.getLogger(__name__)


def partitions_from_cuts(n_layers: int, cut_points: Sequence[int]) -> tuple[tuple[int, int], ...]:
    """Half-open layer ranges delimited by ``cut_points``."""
    cuts = list(cut_points)
    previous = 0
    for cut in cuts:
        if not 0 < cut < n_layers:
            raise InvalidCutPoint(f"cut point {cut} is not an interior layer index of a {n_layers}-layer network")
        if cut <= previous:
            raise InvalidCutPoint(f"cut points must be strictly increasing, got {cuts}")
        previous = cut
    bounds = [0, *cuts, n_layers]
    return tuple(zip(bounds[:-1], bounds[1:]))


def max_partition_cuts(n_layers: int, max_partitions: int | None = None) -> tuple[int, ...]:
    """Cut points splitting the chain into as many near-equal partitions as allowed."""
    count = n_layers if max_partitions is None else max(1, min(n_layers, max_partitions))
    return tuple(i * n_layers // count for i in range(1, count))


def serial_design(
    network: NetworkGraph,
    mode: ExecutionMode = ExecutionMode.THROUGHPUT,
    cut_points: Sequence[int] = (),
) -> DesignPoint:
    """All-serial baseline: coarse = fine = 1 on every layer."""
    return DesignPoint(
        stage_configs=tuple(StageConfig() for _ in network.layers),
        mode=mode,
        partitions=partitions_from_cuts(network.n_layers, cut_points),
    )


def _checked_layer(design: DesignPoint, network: NetworkGraph, layer: int) -> NetworkGraph:
    if not 0 <= layer < design.n_layers:
        raise UnknownLayer(f"layer index {layer} outside [0, {design.n_layers})")
    if network.n_layers != design.n_layers:
        raise UnknownLayer(f"design has {design.n_layers} layers, network {network.name} has {network.n_layers}")
    return network if network.has_shapes else infer_shapes(network)


def _with_config(design: DesignPoint, layer: int, config: StageConfig) -> DesignPoint:
    configs = list(design.stage_configs)
    configs[layer] = config
    return design.model_copy(update={"stage_configs": tuple(configs)})


def set_coarse_folding(design: DesignPoint, network: NetworkGraph, layer: int, coarse: int) -> DesignPoint:
    network = _checked_layer(design, network, layer)
    cap = coarse_cap(network.layers[layer], network.in_shape(layer))
    if not 1 <= coarse <= cap:
        raise FoldingOutOfRange(layer, "coarse", coarse, cap)
    current = design.stage_configs[layer]
    return _with_config(design, layer, StageConfig(coarse=coarse, fine=current.fine))


def set_fine_folding(design: DesignPoint, network: NetworkGraph, layer: int, fine: int) -> DesignPoint:
    network = _checked_layer(design, network, layer)
    cap = fine_cap(network.layers[layer], network.in_shape(layer))
    if not 1 <= fine <= cap:
        raise FoldingOutOfRange(layer, "fine", fine, cap)
    current = design.stage_configs[layer]
    return _with_config(design, layer, StageConfig(coarse=current.coarse, fine=fine))


def partition_graph(design: DesignPoint, cut_points: Sequence[int]) -> DesignPoint:
    """Split into standalone accelerators with device reconfiguration in between.

    Each partition processes the whole batch before the device switches to the
    next one; P partitions cost P-1 reconfigurations per batch.
    """
    if design.mode != ExecutionMode.THROUGHPUT:
        raise ModeMismatch("partition_graph needs a throughput-mode design; use weights_reloading for latency mode")
    partitions = partitions_from_cuts(design.n_layers, cut_points)
    return DesignPoint(stage_configs=design.stage_configs, mode=ExecutionMode.THROUGHPUT, partitions=partitions)


def weights_reloading(design: DesignPoint, cut_points: Sequence[int]) -> DesignPoint:
    """Run partitions back-to-back on one flexible architecture, reloading weights.

    No device reconfiguration happens; between partitions of the same input the
    next partition's weights are streamed in from off-chip memory.
    """
    partitions = partitions_from_cuts(design.n_layers, cut_points)
    return DesignPoint(stage_configs=design.stage_configs, mode=ExecutionMode.LATENCY, partitions=partitions)


def set_mode(design: DesignPoint, mode: ExecutionMode) -> DesignPoint:
    if design.mode == mode:
        return design
    return design.model_copy(update={"mode": mode})
