"""Analytical latency, throughput, resource and bandwidth models.

All cycle arithmetic is done on integers; conversion to seconds happens last.
Every function here is pure, so the search layer can call it from worker threads.
"""

import logging
import math

from streamflow.src.config_package import settings
from streamflow.src.model_ir.enums import LayerKind
from streamflow.src.model_ir.schemas import NetworkGraph
from streamflow.src.perf_model.cycles import check_design, partition_cycles
from streamflow.src.perf_model.profile import LayerProfile, profile_network
from streamflow.src.perf_model.schemas import DeviceDescriptor, FitVerdict, PerfReport, ResourceVector
from streamflow.src.sdf.schemas import StageConfig
from streamflow.src.transforms.enums import ExecutionMode
from streamflow.src.transforms.schemas import DesignPoint

logger = logging.getLogger(__name__)


def _pipelined(design: DesignPoint) -> bool:
    return design.mode == ExecutionMode.THROUGHPUT or design.partition_count == 1


def reload_seconds(design: DesignPoint, network: NetworkGraph, device: DeviceDescriptor, partition: int) -> float:
    """Time to stream one partition's weights in from off-chip memory."""
    start, stop = design.partitions[partition]
    weights = sum(p.weights for p in profile_network(network)[start:stop])
    return weights * device.word_bits / device.bandwidth_bps


def estimate_latency(design: DesignPoint, network: NetworkGraph, device: DeviceDescriptor) -> float:
    """Seconds from first input token to last output token of a single input."""
    compute_cycles = sum(sum(cycles) for cycles in partition_cycles(design, network))
    compute_s = compute_cycles / device.clock_hz

    if design.partition_count == 1:
        return compute_s
    if design.mode == ExecutionMode.LATENCY:
        reloads = sum(reload_seconds(design, network, device, p) for p in range(1, design.partition_count))
        return compute_s + reloads
    return compute_s + (design.partition_count - 1) * device.reconfig_s


def batch_seconds(design: DesignPoint, network: NetworkGraph, device: DeviceDescriptor, batch: int) -> float:
    """Wall time to push ``batch`` inputs through the design.

    Pipelined (Throughput mode, or any single-partition design): each partition
    runs the whole batch, sum(T) + (B - 1) * max(T) cycles, then the device is
    reconfigured, P - 1 times in all.

    Latency mode with P > 1 does not overlap inputs: B * latency plus one reload
    of partition 1 before every input after the first, so steady state pays P
    reloads per input. This is B * latency + (B - 1) * reload_1, not the plain
    B * latency. A single-partition Latency-mode design never reloads and
    pipelines like Throughput mode, so its B = 1 throughput is 1 / latency but
    larger batches approach 1 / max(T).
    """
    if batch < 1:
        raise ValueError(f"batch must be >= 1, got {batch}")

    if not _pipelined(design):
        latency = estimate_latency(design, network, device)
        return batch * latency + (batch - 1) * reload_seconds(design, network, device, 0)

    total_cycles = sum(sum(cycles) + (batch - 1) * max(cycles) for cycles in partition_cycles(design, network))
    return total_cycles / device.clock_hz + (design.partition_count - 1) * device.reconfig_s


def estimate_throughput(design: DesignPoint, network: NetworkGraph, device: DeviceDescriptor, batch: int = 1) -> float:
    """Inputs per second at batch size ``batch``."""
    return batch / batch_seconds(design, network, device, batch)


def stage_resources(profile: LayerProfile, config: StageConfig, device: DeviceDescriptor) -> ResourceVector:
    layer = profile.layer
    block = settings.BRAM_BLOCK_BITS

    dsp = config.coarse * config.fine if layer.kind in (LayerKind.CONV, LayerKind.FC) else 0
    line_buffer_bits = 0
    if layer.is_windowed:
        line_buffer_bits = (layer.kernel - 1) * profile.in_shape.width * profile.in_shape.channels * device.word_bits
    weight_bits = profile.weights * device.word_bits
    bram = math.ceil(line_buffer_bits / block) + math.ceil(weight_bits / block)
    lut = math.ceil(device.lut_alpha + device.lut_beta * config.coarse * config.fine)
    return ResourceVector(dsp=dsp, bram=bram, lut=lut)


def estimate_resources(design: DesignPoint, network: NetworkGraph, device: DeviceDescriptor) -> ResourceVector:
    """Resources the design occupies on the device.

    Throughput mode: partitions occupy the device one at a time, so the largest
    one sets the requirement. Latency mode: one flexible architecture sized for
    every partition, position by position.
    """
    profiles = profile_network(network)
    per_partition = [
        [stage_resources(profiles[i], design.stage_configs[i], device) for i in range(start, stop)]
        for start, stop in design.partitions
    ]

    if design.mode == ExecutionMode.THROUGHPUT or design.partition_count == 1:
        total = ResourceVector()
        for stages in per_partition:
            partition_total = sum(stages, ResourceVector())
            total = total.maximum(partition_total)
        return total

    envelope = ResourceVector()
    depth = max(len(stages) for stages in per_partition)
    for position in range(depth):
        slot = ResourceVector()
        for stages in per_partition:
            if position < len(stages):
                slot = slot.maximum(stages[position])
        envelope = envelope + slot
    return envelope


def estimate_bandwidth(design: DesignPoint, network: NetworkGraph, device: DeviceDescriptor) -> float:
    """Off-chip feature-map traffic in Gbit/s, worst partition.

    Each partition reads its input and writes its output once per input, spread
    over one initiation interval.
    """
    profiles = profile_network(network)
    demand = 0.0
    for (start, stop), cycles in zip(design.partitions, partition_cycles(design, network)):
        io_bits = (profiles[start].in_shape.elements + profiles[stop - 1].out_shape.elements) * device.word_bits
        demand = max(demand, io_bits * device.clock_hz / max(cycles))
    return demand / 1e9


def check_fit(resources: ResourceVector, device: DeviceDescriptor) -> FitVerdict:
    violations = tuple(
        f"{name} {used} > {capacity}"
        for name, used, capacity in zip(("dsp", "bram", "lut"), resources.as_tuple(), device.capacity.as_tuple())
        if used > capacity
    )
    return FitVerdict(feasible=not violations, violations=violations)


def evaluate_design(
    design: DesignPoint, network: NetworkGraph, device: DeviceDescriptor, batch: int = 1
) -> PerfReport:
    """Full report for one design point; raises only on malformed designs."""
    check_design(design, network)

    resources = estimate_resources(design, network, device)
    bandwidth = estimate_bandwidth(design, network, device)
    verdict = check_fit(resources, device)
    violations = list(verdict.violations)
    if bandwidth > device.mem_bandwidth_gbps:
        violations.append(f"bandwidth {bandwidth:.6g} > {device.mem_bandwidth_gbps:.6g}")

    throughput = estimate_throughput(design, network, device, batch)
    return PerfReport(
        design=design,
        batch=batch,
        throughput_ips=throughput,
        latency_s=estimate_latency(design, network, device),
        resources=resources,
        bandwidth_demand_gbps=bandwidth,
        feasible=not violations,
        violations=tuple(violations),
        performance_gops=throughput * sum(p.ops for p in profile_network(network)) / 1e9,
    )
