"""Line-oriented network description format.

    input <channels> <height> <width>
    conv name=<id> k=<int> s=<int> p=<int> out=<int>
    pool name=<id> k=<int> s=<int> type=max|avg
    relu name=<id>
    fc name=<id> out=<int>

Fields are separated by single spaces; unknown keys are rejected.
"""

import logging
from pathlib import Path

from pydantic import ValidationError

from streamflow.src.model_ir.enums import LayerKind, PoolKind
from streamflow.src.model_ir.exceptions import (
    DuplicateName,
    InvalidLayerOrder,
    MalformedLine,
    MissingField,
    NetworkFileError,
    NonPositiveDimension,
    UnknownLayerKind,
)
from streamflow.src.model_ir.schemas import NAME_PATTERN, LayerDescriptor, NetworkGraph, TensorShape
from streamflow.src.model_ir.shapes import infer_shapes
from streamflow.src.utils import content_lines, read_text_file

logger = logging.getLogger(__name__)

LAYER_KEYS: dict[LayerKind, tuple[str, ...]] = {
    LayerKind.CONV: ("name", "k", "s", "p", "out"),
    LayerKind.POOL: ("name", "k", "s", "type"),
    LayerKind.RELU: ("name",),
    LayerKind.FC: ("name", "out"),
}


def _parse_int(line: int, key: str, value: str, minimum: int = 1) -> int:
    try:
        number = int(value)
    except ValueError:
        raise MalformedLine(line, f"{key} must be an integer, got '{value}'") from None
    if number < minimum:
        bound = "positive" if minimum == 1 else "non-negative"
        raise NonPositiveDimension(line, f"{key} must be {bound}, got {number}")
    return number


def _split_fields(line: int, tokens: list[str]) -> list[str]:
    if any(token == "" for token in tokens):
        raise MalformedLine(line, "fields must be separated by single spaces")
    return tokens


def _parse_input(line: int, tokens: list[str]) -> TensorShape:
    if tokens[0] != "input":
        raise MalformedLine(line, "expected 'input <channels> <height> <width>' as the first line")
    if len(tokens) != 4:
        raise MalformedLine(line, "input line takes exactly three dimensions")
    channels, height, width = (
        _parse_int(line, key, value) for key, value in zip(("channels", "height", "width"), tokens[1:])
    )
    return TensorShape(channels=channels, height=height, width=width)


def _parse_layer(line: int, tokens: list[str]) -> LayerDescriptor:
    try:
        kind = LayerKind(tokens[0])
    except ValueError:
        raise UnknownLayerKind(line, f"unknown layer kind '{tokens[0]}'") from None

    allowed = LAYER_KEYS[kind]
    fields: dict[str, str] = {}
    for token in tokens[1:]:
        key, sep, value = token.partition("=")
        if not sep or not key or not value:
            raise MalformedLine(line, f"expected key=value, got '{token}'")
        if key not in allowed:
            raise MalformedLine(line, f"unknown key '{key}' for {kind.value} layer")
        if key in fields:
            raise MalformedLine(line, f"key '{key}' given twice")
        fields[key] = value

    missing = [key for key in allowed if key not in fields]
    if missing:
        raise MissingField(line, f"{kind.value} layer is missing {', '.join(missing)}")

    name = fields["name"]
    if not NAME_PATTERN.match(name):
        raise MalformedLine(line, f"invalid layer name '{name}'")

    attrs: dict = {"name": name, "kind": kind}
    if "k" in fields:
        attrs["kernel"] = _parse_int(line, "k", fields["k"])
        attrs["stride"] = _parse_int(line, "s", fields["s"])
    if "p" in fields:
        attrs["padding"] = _parse_int(line, "p", fields["p"], minimum=0)
    if "out" in fields:
        attrs["out_channels"] = _parse_int(line, "out", fields["out"])
    if "type" in fields:
        try:
            attrs["pool_kind"] = PoolKind(fields["type"])
        except ValueError:
            raise MalformedLine(line, f"pool type must be max or avg, got '{fields['type']}'") from None

    try:
        return LayerDescriptor(**attrs)
    except ValidationError as e:
        raise MalformedLine(line, str(e.errors()[0]["msg"])) from e


def parse_network(text: str, name: str = "network") -> NetworkGraph:
    """Parse, validate and shape-infer a network description."""
    input_shape: TensorShape | None = None
    input_line = 1
    layers: list[LayerDescriptor] = []
    layer_lines: list[int] = []
    declared: dict[str, int] = {}

    for number, line in content_lines(text):
        tokens = _split_fields(number, line.split(" "))

        if input_shape is None:
            input_shape = _parse_input(number, tokens)
            input_line = number
            continue
        if tokens[0] == "input":
            raise MalformedLine(number, "only one input line is allowed")

        layer = _parse_layer(number, tokens)
        if layer.name in declared:
            raise DuplicateName(number, f"layer name '{layer.name}' already declared on line {declared[layer.name]}")
        declared[layer.name] = number
        layers.append(layer)
        layer_lines.append(number)

    if input_shape is None:
        raise MalformedLine(1, "missing 'input <channels> <height> <width>' line")
    if not layers:
        raise MalformedLine(input_line, "network declares no layers")

    # once an fc layer appears, only fc and relu may follow
    first_fc: LayerDescriptor | None = None
    for index, layer in enumerate(layers):
        if first_fc is not None and layer.kind not in (LayerKind.RELU, LayerKind.FC):
            raise InvalidLayerOrder(layer_lines[index], f"{layer.kind.value} layer cannot follow fc layer '{first_fc.name}'")
        if first_fc is None and layer.kind == LayerKind.FC:
            first_fc = layer

    graph = NetworkGraph(name=name, input_shape=input_shape, layers=tuple(layers))
    try:
        graph = infer_shapes(graph)
    except NonPositiveDimension as e:
        line = layer_lines[e.layer_index] if e.layer_index is not None else None
        raise NonPositiveDimension(line, e.detail, e.layer_index) from e

    logger.debug("Parsed network %s: %d layers", name, graph.n_layers)
    return graph


def serialize_network(graph: NetworkGraph) -> str:
    """Canonical text form; ``parse_network(serialize_network(g))`` equals ``g``."""
    shape = graph.input_shape
    lines = [f"input {shape.channels} {shape.height} {shape.width}"]
    for layer in graph.layers:
        if layer.kind == LayerKind.CONV:
            lines.append(
                f"conv name={layer.name} k={layer.kernel} s={layer.stride} p={layer.padding} out={layer.out_channels}"
            )
        elif layer.kind == LayerKind.POOL:
            lines.append(f"pool name={layer.name} k={layer.kernel} s={layer.stride} type={layer.pool_kind.value}")
        elif layer.kind == LayerKind.RELU:
            lines.append(f"relu name={layer.name}")
        else:
            lines.append(f"fc name={layer.name} out={layer.out_channels}")
    return "\n".join(lines) + "\n"


def load_network(path: Path) -> NetworkGraph:
    path = Path(path)
    text = read_text_file(path, NetworkFileError)
    return parse_network(text, name=path.stem)
