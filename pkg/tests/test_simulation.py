from __future__ import annotations

import random

import pytest

from conftest import CONV_RELU, SMALL_CHAIN
from streamflow.src.perf_model.exceptions import SimulationError
from streamflow.src.perf_model.simulation import simulate_makespan, simulate_pipeline


def analytic_makespan(service_times: list[int], batch: int) -> int:
    return sum(service_times) + (batch - 1) * max(service_times)


@pytest.mark.parametrize("batch, expected", [(1, 80), (10, 656)])
def test_two_stage_pipeline(batch, expected):
    assert simulate_makespan([64, 16], batch) == expected


def test_single_stage_is_serial():
    assert simulate_makespan([25], 40) == 1000


def test_bottleneck_in_the_middle():
    assert simulate_makespan([1, 10, 1, 10], 5) == analytic_makespan([1, 10, 1, 10], 5)


@pytest.mark.slow
def test_simulation_matches_formula():
    rng = random.Random(99)
    for _ in range(200):
        service_times = [rng.randint(1, 50) for _ in range(rng.randint(1, 5))]
        batch = rng.randint(1, 1000)
        assert simulate_makespan(service_times, batch) == analytic_makespan(service_times, batch)


def test_simulate_pipeline_uses_design_cycles(make_network, make_device, make_design):
    network = make_network(CONV_RELU)
    assert simulate_pipeline(make_design([(1, 9), (4, 1)]), network, make_device(), 10) == 656


def test_simulate_pipeline_single_partition_only(make_network, make_device, make_design):
    network = make_network(SMALL_CHAIN)
    with pytest.raises(SimulationError):
        simulate_pipeline(make_design([(1, 1)] * 4, cuts=(2,)), network, make_device(), 4)


@pytest.mark.parametrize("batch", [0, 10_001])
def test_batch_bounds(batch):
    with pytest.raises(SimulationError):
        simulate_makespan([3, 4], batch)
