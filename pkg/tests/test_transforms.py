from __future__ import annotations

import random

import pytest
from pydantic import ValidationError

from conftest import SMALL_CHAIN, TINY_CONV
from streamflow.src.perf_model.cycles import check_design
from streamflow.src.perf_model.estimators import evaluate_design
from streamflow.src.sdf.exceptions import FoldingOutOfRange
from streamflow.src.sdf.folding import coarse_cap, fine_cap
from streamflow.src.sdf.schemas import StageConfig
from streamflow.src.transforms.enums import ExecutionMode
from streamflow.src.transforms.exceptions import InvalidCutPoint, ModeMismatch, UnknownLayer
from streamflow.src.transforms.operations import (
    max_partition_cuts,
    partition_graph,
    serial_design,
    set_coarse_folding,
    set_fine_folding,
    set_mode,
    weights_reloading,
)
from streamflow.src.transforms.schemas import DesignPoint


def test_serial_design_is_minimal(make_network):
    design = serial_design(make_network(SMALL_CHAIN))

    assert all(config == StageConfig(coarse=1, fine=1) for config in design.stage_configs)
    assert design.partitions == ((0, 4),)
    assert design.mode == ExecutionMode.THROUGHPUT


def test_folding_returns_new_design(make_network):
    network = make_network(TINY_CONV)
    design = serial_design(network)

    folded = set_fine_folding(set_coarse_folding(design, network, 0, 4), network, 0, 9)

    assert folded.stage_configs[0] == StageConfig(coarse=4, fine=9)
    assert design.stage_configs[0] == StageConfig()


def test_coarse_one_is_identity(make_network):
    network = make_network(TINY_CONV)
    design = serial_design(network)
    assert set_coarse_folding(design, network, 0, 1) == design


@pytest.mark.parametrize(
    "setter, layer, value, parameter",
    [
        (set_coarse_folding, 0, 5, "coarse"),
        (set_fine_folding, 0, 28, "fine"),
        (set_fine_folding, 1, 2, "fine"),
        (set_coarse_folding, 2, 0, "coarse"),
    ],
)
def test_folding_caps(make_network, setter, layer, value, parameter):
    network = make_network(SMALL_CHAIN)
    with pytest.raises(FoldingOutOfRange) as exc_info:
        setter(serial_design(network), network, layer, value)
    assert exc_info.value.layer == layer
    assert exc_info.value.parameter == parameter


def test_folding_unknown_layer(make_network):
    network = make_network(TINY_CONV)
    with pytest.raises(UnknownLayer):
        set_coarse_folding(serial_design(network), network, 3, 1)


def test_partition_graph(make_network):
    design = serial_design(make_network(SMALL_CHAIN))

    split = partition_graph(design, [1, 3])

    assert split.partitions == ((0, 1), (1, 3), (3, 4))
    assert split.cut_points == (1, 3)
    assert split.partition_count == 3
    assert partition_graph(design, []).partitions == ((0, 4),)


@pytest.mark.parametrize("cuts", [[0], [4], [2, 2], [3, 1], [5]])
def test_invalid_cut_points(make_network, cuts):
    design = serial_design(make_network(SMALL_CHAIN))
    with pytest.raises(InvalidCutPoint):
        partition_graph(design, cuts)


def test_partition_graph_needs_throughput_mode(make_network):
    design = serial_design(make_network(SMALL_CHAIN), ExecutionMode.LATENCY)
    with pytest.raises(ModeMismatch):
        partition_graph(design, [2])


def test_weights_reloading_switches_mode(make_network):
    design = serial_design(make_network(SMALL_CHAIN))

    reloaded = weights_reloading(design, [2])

    assert reloaded.mode == ExecutionMode.LATENCY
    assert reloaded.partitions == ((0, 2), (2, 4))
    assert set_mode(reloaded, ExecutionMode.THROUGHPUT).mode == ExecutionMode.THROUGHPUT


def test_max_partition_cuts():
    assert max_partition_cuts(4) == (1, 2, 3)
    assert max_partition_cuts(8, 4) == (2, 4, 6)
    assert max_partition_cuts(5, 1) == ()
    assert max_partition_cuts(3, 10) == (1, 2)


def test_design_point_rejects_gaps():
    with pytest.raises(ValidationError):
        DesignPoint(stage_configs=(StageConfig(), StageConfig()), partitions=((0, 1),))
    with pytest.raises(ValidationError):
        DesignPoint(stage_configs=(StageConfig(), StageConfig()), partitions=((0, 1), (2, 2)))


def test_sort_key_orders_modes_then_partitions(make_design):
    throughput = make_design([(1, 1), (1, 1)], cuts=(1,))
    latency = make_design([(1, 1), (1, 1)], cuts=(1,), mode=ExecutionMode.LATENCY)
    single = make_design([(2, 1), (1, 1)])

    assert sorted([latency, throughput, single], key=DesignPoint.sort_key) == [single, throughput, latency]
    assert throughput.label() == "0:1;1:2"


# scaled-down VGG16: five conv blocks with pooling, then three fc layers
VGG16_SHAPED = """\
input 3 32 32
conv name=conv1_1 k=3 s=1 p=1 out=8
conv name=conv1_2 k=3 s=1 p=1 out=8
pool name=pool1 k=2 s=2 type=max
conv name=conv2_1 k=3 s=1 p=1 out=16
conv name=conv2_2 k=3 s=1 p=1 out=16
pool name=pool2 k=2 s=2 type=max
conv name=conv3_1 k=3 s=1 p=1 out=32
conv name=conv3_2 k=3 s=1 p=1 out=32
conv name=conv3_3 k=3 s=1 p=1 out=32
pool name=pool3 k=2 s=2 type=max
conv name=conv4_1 k=3 s=1 p=1 out=64
conv name=conv4_2 k=3 s=1 p=1 out=64
conv name=conv4_3 k=3 s=1 p=1 out=64
pool name=pool4 k=2 s=2 type=max
conv name=conv5_1 k=3 s=1 p=1 out=64
conv name=conv5_2 k=3 s=1 p=1 out=64
conv name=conv5_3 k=3 s=1 p=1 out=64
pool name=pool5 k=2 s=2 type=max
fc name=fc6 out=64
fc name=fc7 out=64
fc name=fc8 out=10
"""


def _random_transform(rng: random.Random, design: DesignPoint, network) -> DesignPoint:
    layer = rng.randrange(network.n_layers)
    in_shape = network.in_shape(layer)
    interior = list(range(1, network.n_layers))
    cuts = sorted(rng.sample(interior, rng.randint(0, len(interior))))
    choice = rng.randrange(5)
    if choice == 0:
        return set_coarse_folding(design, network, layer, rng.randint(1, coarse_cap(network.layers[layer], in_shape)))
    if choice == 1:
        return set_fine_folding(design, network, layer, rng.randint(1, fine_cap(network.layers[layer], in_shape)))
    if choice == 2 and design.mode == ExecutionMode.THROUGHPUT:
        return partition_graph(design, cuts)
    if choice == 3:
        return weights_reloading(design, cuts)
    return set_mode(design, rng.choice(list(ExecutionMode)))


def test_random_transform_sequences_keep_designs_valid(random_chain):
    rng = random.Random(7)
    for _ in range(40):
        network = random_chain(rng)
        design = serial_design(network)
        for _ in range(25):
            before = design
            design = _random_transform(rng, design, network)

            assert DesignPoint.model_validate(design.model_dump()) == design
            assert design.partitions[0][0] == 0 and design.partitions[-1][1] == network.n_layers
            assert all(a[1] == b[0] for a, b in zip(design.partitions, design.partitions[1:]))
            check_design(design, network)
            assert DesignPoint.model_validate(before.model_dump()) == before


def test_partition_graph_without_cuts_keeps_report(random_chain, random_design, make_device):
    rng = random.Random(11)
    device = make_device(dsp_capacity=10_000, bram_capacity=10_000)
    for _ in range(30):
        network = random_chain(rng)
        design = random_design(rng, network)

        assert evaluate_design(partition_graph(design, []), network, device, 16) == evaluate_design(
            design, network, device, 16
        )


def test_transform_then_inverse_restores_design(make_network):
    network = make_network(SMALL_CHAIN)
    design = set_fine_folding(set_coarse_folding(serial_design(network), network, 0, 2), network, 0, 9)

    assert set_coarse_folding(set_coarse_folding(design, network, 0, 4), network, 0, 2) == design
    assert set_fine_folding(set_fine_folding(design, network, 3, 32), network, 3, 1) == design
    assert partition_graph(partition_graph(design, [1, 3]), []) == design
    assert partition_graph(set_mode(weights_reloading(design, [2]), ExecutionMode.THROUGHPUT), []) == design
    assert set_mode(set_mode(design, ExecutionMode.LATENCY), ExecutionMode.THROUGHPUT) == design


def test_weights_reloading_fits_vgg16_shaped_chain(make_network, make_device):
    network = make_network(VGG16_SHAPED, name="vgg16")
    device = make_device(bram_capacity=100)
    design = serial_design(network)
    # conv4_2 .. conv5_3 each open a partition, so their weight buffers share one slot
    reloaded = weights_reloading(design, [11, 12, 14, 15, 16])

    whole = evaluate_design(design, network, device)
    split = evaluate_design(reloaded, network, device)

    assert not whole.feasible
    assert any(violation.startswith("bram") for violation in whole.violations)
    assert split.feasible
    assert split.design.mode == ExecutionMode.LATENCY
    assert split.resources.bram < whole.resources.bram
    assert split.latency_s > whole.latency_s


def test_weights_reloading_without_cuts_adds_no_reload(make_network, make_device):
    network = make_network(SMALL_CHAIN)
    device = make_device()
    design = serial_design(network)

    assert evaluate_design(weights_reloading(design, []), network, device).latency_s == pytest.approx(
        evaluate_design(design, network, device).latency_s
    )
