"""Per-layer folding limits."""

from functools import lru_cache

from streamflow.src.model_ir.enums import LayerKind
from streamflow.src.model_ir.schemas import LayerDescriptor, TensorShape
from streamflow.src.sdf.exceptions import FoldingOutOfRange
from streamflow.src.sdf.schemas import StageConfig


def coarse_cap(layer: LayerDescriptor, in_shape: TensorShape) -> int:
    if layer.kind in (LayerKind.CONV, LayerKind.FC):
        return layer.out_channels
    return in_shape.channels


def fine_cap(layer: LayerDescriptor, in_shape: TensorShape) -> int:
    if layer.kind == LayerKind.CONV:
        return in_shape.channels * layer.kernel ** 2
    if layer.kind == LayerKind.FC:
        return in_shape.elements
    return 1


def validate_config(layer: LayerDescriptor, in_shape: TensorShape, config: StageConfig, index: int) -> None:
    cap = coarse_cap(layer, in_shape)
    if not 1 <= config.coarse <= cap:
        raise FoldingOutOfRange(index, "coarse", config.coarse, cap)
    cap = fine_cap(layer, in_shape)
    if not 1 <= config.fine <= cap:
        raise FoldingOutOfRange(index, "fine", config.fine, cap)


@lru_cache(maxsize=4096)
def divisors(n: int) -> tuple[int, ...]:
    """Sorted divisors of ``n`` (``n`` itself included)."""
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return tuple(small + large[::-1])
