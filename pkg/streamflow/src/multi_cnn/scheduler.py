"""Deterministic time-division scheduling of off-chip transfers.

Every CNN moves its per-input traffic in one slot per period. Slots are laid
back to back from cycle 0 in earliest-deadline-first order, a CNN's deadline
being its own execution time per input.
"""

import logging
import math
from fractions import Fraction
from typing import Sequence

from streamflow.src.model_ir.schemas import NetworkGraph
from streamflow.src.multi_cnn.exceptions import BandwidthInfeasible
from streamflow.src.multi_cnn.schemas import MemoryTransferSchedule, TransferSlot
from streamflow.src.perf_model.cycles import design_cycles
from streamflow.src.perf_model.profile import profile_network
from streamflow.src.perf_model.schemas import DeviceDescriptor
from streamflow.src.transforms.enums import ExecutionMode
from streamflow.src.transforms.schemas import DesignPoint

logger = logging.getLogger(__name__)


def bits_per_cycle(device: DeviceDescriptor) -> Fraction:
    bandwidth = Fraction(device.mem_bandwidth_gbps).limit_denominator(10**9) * 10**9
    clock = Fraction(device.clock_mhz).limit_denominator(10**9) * 10**6
    return bandwidth / clock


def transfer_bits(design: DesignPoint, network: NetworkGraph, device: DeviceDescriptor) -> int:
    """Off-chip bits one input needs: network input and output, plus weight reloads."""
    profiles = profile_network(network)
    elements = profiles[0].in_shape.elements + profiles[-1].out_shape.elements
    reload_weights = 0
    if design.mode == ExecutionMode.LATENCY and design.partition_count > 1:
        reload_weights = sum(p.weights for p in profiles[design.partitions[1][0]:])
    return (elements + reload_weights) * device.word_bits


def execution_cycles(design: DesignPoint, network: NetworkGraph) -> int:
    return sum(design_cycles(design, network))


def schedule_demands(
    demands: Sequence[int], deadlines: Sequence[int], device: DeviceDescriptor
) -> MemoryTransferSchedule:
    """EDF slots for raw per-CNN bit demands; the period is the longest deadline.

    Slots are laid end to end in deadline order (ties by CNN index), each as long
    as its demand needs at full device bandwidth, rounded up to whole cycles.
    A CNN with zero demand gets no slot.

    Raises:
        BandwidthInfeasible: the demands exceed one period of bandwidth, before or
            after rounding slot lengths up.
    """
    # 1. Aggregate check against one period of bandwidth
    period = max(deadlines)
    rate = bits_per_cycle(device)
    capacity = math.floor(rate * period)
    total = sum(demands)
    if total > rate * period:
        raise BandwidthInfeasible(total, capacity)

    # 2. Earliest deadline first, back to back from cycle 0
    order = sorted(range(len(demands)), key=lambda j: (deadlines[j], j))
    slots = []
    cursor = 0
    for j in order:
        if demands[j] == 0:
            continue
        duration = math.ceil(Fraction(demands[j]) / rate)
        slots.append(TransferSlot(cnn=j, start=cursor, duration=duration, bits=demands[j]))
        cursor += duration
    # 3. Rounding can push the last slot past the period
    if cursor > period:
        raise BandwidthInfeasible(
            total, capacity, f"rounded slot lengths need {cursor} cycles, period is {period}"
        )

    logger.debug("Scheduled %d transfers in a %d-cycle period (%d busy)", len(slots), period, cursor)
    return MemoryTransferSchedule(
        period=period, slots=tuple(slots), demands=tuple(demands), deadlines=tuple(deadlines)
    )


def schedule_transfers(
    designs: Sequence[DesignPoint], networks: Sequence[NetworkGraph], device: DeviceDescriptor
) -> MemoryTransferSchedule:
    demands = [transfer_bits(design, network, device) for design, network in zip(designs, networks)]
    deadlines = [execution_cycles(design, network) for design, network in zip(designs, networks)]
    return schedule_demands(demands, deadlines, device)


def validate_schedule(schedule: MemoryTransferSchedule, device: DeviceDescriptor) -> list[str]:
    """Independent check of a schedule; returns the problems found (empty when valid)."""
    problems = []
    rate = bits_per_cycle(device)
    slots = sorted(schedule.slots, key=lambda slot: slot.start)

    for slot in slots:
        if slot.end > schedule.period:
            problems.append(f"slot of cnn {slot.cnn} ends at {slot.end}, after period {schedule.period}")
        if slot.bits > rate * slot.duration:
            problems.append(f"slot of cnn {slot.cnn} moves {slot.bits} bits in {slot.duration} cycles")
    for previous, slot in zip(slots, slots[1:]):
        if slot.start < previous.end:
            problems.append(f"slots of cnn {previous.cnn} and cnn {slot.cnn} overlap")

    delivered = [0] * len(schedule.demands)
    for slot in slots:
        if slot.cnn >= len(delivered):
            problems.append(f"slot for unknown cnn {slot.cnn}")
            continue
        delivered[slot.cnn] += slot.bits
    for cnn, (got, needed) in enumerate(zip(delivered, schedule.demands)):
        if got < needed:
            problems.append(f"cnn {cnn} gets {got} of {needed} bits")

    if sum(slot.bits for slot in slots) > rate * schedule.period:
        problems.append("bits per period exceed bandwidth x period")
    return problems


def transfer_stalls(schedule: MemoryTransferSchedule) -> tuple[int, ...]:
    """Cycles each CNN's transfer finishes past its deadline."""
    finish = [0] * len(schedule.demands)
    for slot in schedule.slots:
        finish[slot.cnn] = max(finish[slot.cnn], slot.end)
    return tuple(max(0, end - deadline) for end, deadline in zip(finish, schedule.deadlines))
