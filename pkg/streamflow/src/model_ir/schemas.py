import re

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from streamflow.src.model_ir.enums import LayerKind, PoolKind

NAME_PATTERN = re.compile(r"^[A-Za-z_][A-Za-z0-9_.\-]*$")


class TensorShape(BaseModel):
    """Channels x height x width, in elements."""

    model_config = ConfigDict(frozen=True)

    channels: int = Field(..., gt=0)
    height: int = Field(..., gt=0)
    width: int = Field(..., gt=0)

    @property
    def elements(self) -> int:
        return self.channels * self.height * self.width

    def __str__(self) -> str:
        return f"{self.channels}x{self.height}x{self.width}"


class LayerDescriptor(BaseModel):
    """One layer of a CNN chain.

    kernel/stride/padding keep their neutral values (1, 1, 0) for ReLU and FC.
    """

    model_config = ConfigDict(frozen=True)

    name: str = Field(..., min_length=1)
    kind: LayerKind
    kernel: int = Field(default=1, ge=1)
    stride: int = Field(default=1, ge=1)
    padding: int = Field(default=0, ge=0)
    out_channels: int | None = Field(default=None, gt=0)
    pool_kind: PoolKind | None = None

    @field_validator("name")
    @classmethod
    def validate_name(cls, v: str) -> str:
        if not NAME_PATTERN.match(v):
            raise ValueError(f"invalid layer name: {v!r}")
        return v

    @model_validator(mode="after")
    def validate_kind_fields(self):
        kind = self.kind

        if kind in (LayerKind.CONV, LayerKind.FC) and self.out_channels is None:
            raise ValueError(f"{kind.value} layer '{self.name}' needs out_channels")
        if kind in (LayerKind.POOL, LayerKind.RELU) and self.out_channels is not None:
            raise ValueError(f"out_channels is only for conv/fc layers ('{self.name}')")

        if kind == LayerKind.POOL and self.pool_kind is None:
            raise ValueError(f"pool layer '{self.name}' needs pool_kind")
        if kind != LayerKind.POOL and self.pool_kind is not None:
            raise ValueError(f"pool_kind is only for pool layers ('{self.name}')")

        if kind in (LayerKind.RELU, LayerKind.FC) and (self.kernel, self.stride, self.padding) != (1, 1, 0):
            raise ValueError(f"{kind.value} layer '{self.name}' takes no kernel/stride/padding")

        return self

    @property
    def is_windowed(self) -> bool:
        return self.kind in (LayerKind.CONV, LayerKind.POOL)


class NetworkGraph(BaseModel):
    """Linear chain of layers; ``shapes[i]`` is the output shape of ``layers[i]``."""

    model_config = ConfigDict(frozen=True)

    name: str = "network"
    input_shape: TensorShape
    layers: tuple[LayerDescriptor, ...] = Field(..., min_length=1)
    shapes: tuple[TensorShape, ...] = ()

    @model_validator(mode="after")
    def validate_chain(self):
        seen: set[str] = set()
        for layer in self.layers:
            if layer.name in seen:
                raise ValueError(f"duplicate layer name: {layer.name}")
            seen.add(layer.name)

        first_fc = next((layer for layer in self.layers if layer.kind == LayerKind.FC), None)
        if first_fc is not None:
            for layer in self.layers[self.layers.index(first_fc) + 1:]:
                if layer.kind not in (LayerKind.RELU, LayerKind.FC):
                    raise ValueError(f"{layer.kind.value} layer '{layer.name}' cannot follow fc layer '{first_fc.name}'")

        if self.shapes and len(self.shapes) != len(self.layers):
            raise ValueError("shapes must be empty or hold one entry per layer")
        return self

    @property
    def n_layers(self) -> int:
        return len(self.layers)

    @property
    def has_shapes(self) -> bool:
        return len(self.shapes) == len(self.layers)

    def in_shape(self, index: int) -> TensorShape:
        return self.input_shape if index == 0 else self.shapes[index - 1]

    def out_shape(self, index: int) -> TensorShape:
        return self.shapes[index]


class LayerSummary(BaseModel):
    """Row of the shape table printed by ``streamflow parse``."""

    index: int
    name: str
    kind: LayerKind
    in_shape: TensorShape
    out_shape: TensorShape
    ops: int
    weights: int
