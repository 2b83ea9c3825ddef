from functools import lru_cache
from typing import NamedTuple

from streamflow.src.model_ir.schemas import LayerDescriptor, NetworkGraph, TensorShape
from streamflow.src.model_ir.shapes import infer_shapes, layer_ops, layer_weights
from streamflow.src.sdf.folding import coarse_cap, divisors, fine_cap


class LayerProfile(NamedTuple):
    """Static per-layer figures the estimators need for every design point."""
    index: int
    layer: LayerDescriptor
    in_shape: TensorShape
    out_shape: TensorShape
    ops: int
    weights: int
    coarse_cap: int
    fine_cap: int

    @property
    def coarse_options(self) -> tuple[int, ...]:
        return divisors(self.coarse_cap)

    @property
    def fine_options(self) -> tuple[int, ...]:
        return divisors(self.fine_cap)


@lru_cache(maxsize=512)
def profile_network(network: NetworkGraph) -> tuple[LayerProfile, ...]:
    if not network.has_shapes:
        network = infer_shapes(network)
    profiles = []
    for i, layer in enumerate(network.layers):
        in_shape, out_shape = network.in_shape(i), network.out_shape(i)
        profiles.append(
            LayerProfile(
                index=i,
                layer=layer,
                in_shape=in_shape,
                out_shape=out_shape,
                ops=layer_ops(layer, in_shape, out_shape),
                weights=layer_weights(layer, in_shape),
                coarse_cap=coarse_cap(layer, in_shape),
                fine_cap=fine_cap(layer, in_shape),
            )
        )
    return tuple(profiles)
