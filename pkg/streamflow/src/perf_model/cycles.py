"""Integer cycle counts per stage and per partition."""

from streamflow.src.model_ir.enums import LayerKind
from streamflow.src.model_ir.schemas import LayerDescriptor, NetworkGraph, TensorShape
from streamflow.src.model_ir.shapes import layer_ops
from streamflow.src.perf_model.profile import profile_network
from streamflow.src.sdf.folding import validate_config
from streamflow.src.sdf.schemas import StageConfig
from streamflow.src.transforms.exceptions import UnknownLayer
from streamflow.src.transforms.schemas import DesignPoint


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def cycles_for_ops(kind: LayerKind, ops: int, config: StageConfig) -> int:
    if kind in (LayerKind.CONV, LayerKind.FC):
        return _ceil_div(ops, config.coarse * config.fine)
    return _ceil_div(ops, config.coarse)


def stage_cycles(layer: LayerDescriptor, in_shape: TensorShape, out_shape: TensorShape, config: StageConfig) -> int:
    """Active cycles one stage spends per network input."""
    return cycles_for_ops(layer.kind, layer_ops(layer, in_shape, out_shape), config)


def check_design(design: DesignPoint, network: NetworkGraph) -> None:
    """Raise if ``design`` does not describe ``network`` or breaks a folding cap."""
    if design.n_layers != network.n_layers:
        raise UnknownLayer(f"design has {design.n_layers} layers, network {network.name} has {network.n_layers}")
    for profile, config in zip(profile_network(network), design.stage_configs):
        validate_config(profile.layer, profile.in_shape, config, profile.index)


def design_cycles(design: DesignPoint, network: NetworkGraph) -> tuple[int, ...]:
    profiles = profile_network(network)
    return tuple(
        cycles_for_ops(p.layer.kind, p.ops, config) for p, config in zip(profiles, design.stage_configs)
    )


def partition_cycles(design: DesignPoint, network: NetworkGraph) -> list[tuple[int, ...]]:
    """Stage cycle vectors, one per partition."""
    cycles = design_cycles(design, network)
    return [cycles[start:stop] for start, stop in design.partitions]
