from __future__ import annotations

import random

import pytest

from streamflow.src.model_ir.parser import parse_network
from streamflow.src.model_ir.schemas import NetworkGraph
from streamflow.src.perf_model.schemas import DeviceDescriptor
from streamflow.src.sdf.folding import coarse_cap, fine_cap
from streamflow.src.sdf.schemas import StageConfig
from streamflow.src.transforms.enums import ExecutionMode
from streamflow.src.transforms.operations import partitions_from_cuts
from streamflow.src.transforms.schemas import DesignPoint

# 1x8x8 -> conv k=3 -> 4x6x6: coarse in {1,2,4}, fine in {1,3,9}
TINY_CONV = "input 1 8 8\nconv name=c1 k=3 s=1 p=0 out=4\n"

# conv (576 ops) then relu (64 ops): T = (64, 16) with folding (1,9), (4,1)
CONV_RELU = "input 1 6 6\nconv name=c1 k=3 s=1 p=0 out=4\nrelu name=r1\n"

SMALL_CHAIN = """\
# three windowed layers and a classifier
input 3 8 8
conv name=conv1 k=3 s=1 p=1 out=4
relu name=relu1
pool name=pool1 k=2 s=2 type=max
fc name=fc1 out=10
"""

DEVICE_TEXT = """\
device name=zc706
dsp 900
bram 1090
lut 218600
clock_mhz 125
bandwidth_gbps 4.2
reconfig_ms 80
word_bits 16
"""


@pytest.fixture
def make_network():
    def _make(text: str = TINY_CONV, name: str = "network") -> NetworkGraph:
        return parse_network(text, name=name)

    return _make


@pytest.fixture
def make_device():
    def _make(**overrides) -> DeviceDescriptor:
        fields = dict(
            name="test",
            dsp_capacity=220,
            bram_capacity=280,
            lut_capacity=1_000_000,
            clock_mhz=100.0,
            mem_bandwidth_gbps=1000.0,
            reconfig_ms=80.0,
            word_bits=16,
        )
        fields.update(overrides)
        return DeviceDescriptor(**fields)

    return _make


@pytest.fixture
def make_design():
    def _make(
        folding: list[tuple[int, int]],
        cuts: tuple[int, ...] = (),
        mode: ExecutionMode = ExecutionMode.THROUGHPUT,
    ) -> DesignPoint:
        return DesignPoint(
            stage_configs=tuple(StageConfig(coarse=c, fine=f) for c, f in folding),
            mode=mode,
            partitions=partitions_from_cuts(len(folding), cuts),
        )

    return _make


@pytest.fixture
def write_file(tmp_path):
    def _write(name: str, text: str):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


def _random_chain_text(rng: random.Random, max_layers: int) -> str:
    channels = rng.randint(1, 4)
    size = rng.randint(4, 12)
    lines = [f"input {channels} {size} {size}"]
    for i in range(rng.randint(1, max_layers)):
        kind = rng.choice(["conv", "conv", "pool", "relu"])
        if kind == "pool" and size >= 2:
            lines.append(f"pool name=l{i} k=2 s=2 type={rng.choice(['max', 'avg'])}")
            size //= 2
        elif kind == "relu":
            lines.append(f"relu name=l{i}")
        else:
            kernel = rng.choice([1, 3]) if size >= 3 else 1
            padding = 1 if kernel == 3 and rng.random() < 0.5 else 0
            channels = rng.randint(1, 6)
            lines.append(f"conv name=l{i} k={kernel} s=1 p={padding} out={channels}")
            size = size + 2 * padding - kernel + 1
    if rng.random() < 0.3:
        lines.append(f"fc name=head out={rng.randint(1, 8)}")
    return "\n".join(lines) + "\n"


@pytest.fixture
def random_chain():
    """Random valid conv/pool/relu chain, optionally ending in an fc layer."""

    def _make(rng: random.Random, max_layers: int = 5, name: str = "random") -> NetworkGraph:
        return parse_network(_random_chain_text(rng, max_layers), name=name)

    return _make


@pytest.fixture
def random_design():
    """Random in-cap folding (not restricted to divisors) with random cuts."""

    def _make(rng: random.Random, network: NetworkGraph, max_partitions: int = 1) -> DesignPoint:
        configs = []
        for i, layer in enumerate(network.layers):
            in_shape = network.in_shape(i)
            configs.append(
                StageConfig(
                    coarse=rng.randint(1, coarse_cap(layer, in_shape)),
                    fine=rng.randint(1, min(fine_cap(layer, in_shape), 64)),
                )
            )
        interior = list(range(1, network.n_layers))
        cuts = tuple(sorted(rng.sample(interior, min(len(interior), rng.randint(0, max_partitions - 1)))))
        mode = rng.choice(list(ExecutionMode)) if cuts else ExecutionMode.THROUGHPUT
        return DesignPoint(stage_configs=tuple(configs), mode=mode, partitions=partitions_from_cuts(network.n_layers, cuts))

    return _make
