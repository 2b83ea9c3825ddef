"""Shape inference and per-layer workload figures.

Operation counts are MACs (one multiply-accumulate = one op), not the 2x
multiply-plus-add convention.
"""

import logging

from streamflow.src.model_ir.enums import LayerKind
from streamflow.src.model_ir.exceptions import NonPositiveDimension
from streamflow.src.model_ir.schemas import LayerDescriptor, LayerSummary, NetworkGraph, TensorShape

logger = logging.getLogger(__name__)


def _window_extent(size: int, layer: LayerDescriptor) -> int:
    return (size + 2 * layer.padding - layer.kernel) // layer.stride + 1


def output_shape(layer: LayerDescriptor, in_shape: TensorShape, index: int | None = None) -> TensorShape:
    """Output shape of ``layer`` applied to ``in_shape``."""
    if layer.kind == LayerKind.FC:
        return TensorShape(channels=layer.out_channels, height=1, width=1)

    if layer.kind == LayerKind.RELU:
        return in_shape

    padded_h = in_shape.height + 2 * layer.padding
    padded_w = in_shape.width + 2 * layer.padding
    if padded_h < layer.kernel or padded_w < layer.kernel:
        raise NonPositiveDimension(
            None,
            f"{layer.kind.value} layer '{layer.name}': kernel {layer.kernel} exceeds padded input "
            f"{padded_h}x{padded_w}",
            layer_index=index,
        )

    height = _window_extent(in_shape.height, layer)
    width = _window_extent(in_shape.width, layer)
    channels = layer.out_channels if layer.kind == LayerKind.CONV else in_shape.channels

    if min(channels, height, width) <= 0:
        raise NonPositiveDimension(
            None,
            f"{layer.kind.value} layer '{layer.name}' infers {channels}x{height}x{width}",
            layer_index=index,
        )
    return TensorShape(channels=channels, height=height, width=width)


def infer_shapes(graph: NetworkGraph) -> NetworkGraph:
    """Return a copy of ``graph`` with every layer's output shape filled in."""
    shapes: list[TensorShape] = []
    current = graph.input_shape
    for index, layer in enumerate(graph.layers):
        current = output_shape(layer, current, index)
        shapes.append(current)
    return graph.model_copy(update={"shapes": tuple(shapes)})


def layer_ops(layer: LayerDescriptor, in_shape: TensorShape, out_shape: TensorShape) -> int:
    """MAC (Conv/FC/Pool window) or elementwise (ReLU) operation count per input."""
    if layer.kind == LayerKind.CONV:
        return out_shape.height * out_shape.width * out_shape.channels * in_shape.channels * layer.kernel ** 2
    if layer.kind == LayerKind.FC:
        return in_shape.elements * layer.out_channels
    if layer.kind == LayerKind.POOL:
        return out_shape.height * out_shape.width * out_shape.channels * layer.kernel ** 2
    return in_shape.elements


def layer_weights(layer: LayerDescriptor, in_shape: TensorShape) -> int:
    if layer.kind == LayerKind.CONV:
        return layer.out_channels * in_shape.channels * layer.kernel ** 2
    if layer.kind == LayerKind.FC:
        return in_shape.elements * layer.out_channels
    return 0


def _shaped(graph: NetworkGraph) -> NetworkGraph:
    return graph if graph.has_shapes else infer_shapes(graph)


def network_ops(graph: NetworkGraph) -> int:
    graph = _shaped(graph)
    return sum(
        layer_ops(layer, graph.in_shape(i), graph.out_shape(i)) for i, layer in enumerate(graph.layers)
    )


def network_weights(graph: NetworkGraph) -> int:
    graph = _shaped(graph)
    return sum(layer_weights(layer, graph.in_shape(i)) for i, layer in enumerate(graph.layers))


def layer_summaries(graph: NetworkGraph) -> list[LayerSummary]:
    graph = _shaped(graph)
    return [
        LayerSummary(
            index=i,
            name=layer.name,
            kind=layer.kind,
            in_shape=graph.in_shape(i),
            out_shape=graph.out_shape(i),
            ops=layer_ops(layer, graph.in_shape(i), graph.out_shape(i)),
            weights=layer_weights(layer, graph.in_shape(i)),
        )
        for i, layer in enumerate(graph.layers)
    ]
