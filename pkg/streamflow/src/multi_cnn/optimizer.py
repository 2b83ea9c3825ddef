"""Joint search over resource shares and per-CNN designs.

Shares live on an integer grid of ``steps`` (share = k / steps, k >= 1).
Every CNN runs a single-partition design: all of them are resident at once.
"""

import logging
import math
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from streamflow.src.config_package import settings
from streamflow.src.dse.annealer import apply_folding, folding_moves
from streamflow.src.dse.enumerator import folding_options
from streamflow.src.dse.exceptions import SpaceTooLarge
from streamflow.src.dse.schemas import OptimizerConfig
from streamflow.src.exceptions import InfeasibleError
from streamflow.src.multi_cnn.allocation import allocate_resources
from streamflow.src.multi_cnn.cost import cost_breakdown
from streamflow.src.multi_cnn.enums import MultiMoveKind
from streamflow.src.multi_cnn.exceptions import NoFeasibleMapping
from streamflow.src.multi_cnn.schemas import CnnAssignment, MultiCnnMapping, MultiCnnWorkload
from streamflow.src.multi_cnn.scheduler import schedule_transfers, transfer_stalls
from streamflow.src.perf_model.estimators import evaluate_design
from streamflow.src.perf_model.profile import profile_network
from streamflow.src.perf_model.schemas import DeviceDescriptor
from streamflow.src.transforms.enums import ExecutionMode
from streamflow.src.transforms.operations import serial_design
from streamflow.src.transforms.schemas import DesignPoint

logger = logging.getLogger(__name__)

ShareSteps = tuple[int, ...]


def evaluate_mapping(
    workload: MultiCnnWorkload,
    device: DeviceDescriptor,
    shares: Sequence[float | Fraction],
    designs: Sequence[DesignPoint],
    weight: float | None = None,
) -> MultiCnnMapping:
    """Check and cost one joint mapping.

    Raises NoFeasibleMapping when a design misses its budget and
    BandwidthInfeasible when the transfers cannot be scheduled.
    """
    budgets = allocate_resources(workload, device, shares)
    networks = [entry.network for entry in workload.entries]
    reports = []
    for entry, design, budget in zip(workload.entries, designs, budgets):
        report = evaluate_design(design, entry.network, budget)
        if not report.feasible:
            raise NoFeasibleMapping(f"{entry.name} does not fit its budget: {', '.join(report.violations)}")
        reports.append(report)

    schedule = schedule_transfers(designs, networks, device)
    stalls = transfer_stalls(schedule)
    latencies = [report.latency_s + stall / device.clock_hz for report, stall in zip(reports, stalls)]
    breakdown = cost_breakdown(latencies, workload, weight)

    assignments = tuple(
        CnnAssignment(
            name=entry.name,
            share=float(share),
            budget=budget,
            design=design,
            report=report,
            stall_cycles=stall,
            achieved_latency_s=latency,
            target_latency_s=entry.target_latency_s,
            importance=entry.importance,
        )
        for entry, share, budget, design, report, stall, latency in zip(
            workload.entries, shares, budgets, designs, reports, stalls, latencies
        )
    )
    return MultiCnnMapping(device_name=device.name, assignments=assignments, schedule=schedule, breakdown=breakdown)


def share_vectors(n_cnns: int, steps: int) -> Iterator[ShareSteps]:
    """Every grid share vector with k_j >= 1 and sum <= steps, lexicographically."""
    if n_cnns == 0:
        yield ()
        return
    for first in range(1, steps - (n_cnns - 1) + 1):
        for rest in share_vectors(n_cnns - 1, steps - first):
            yield (first, *rest)


class MultiAnnealer:
    def __init__(
        self,
        workload: MultiCnnWorkload,
        device: DeviceDescriptor,
        cfg: OptimizerConfig,
        steps: int | None = None,
        weight: float | None = None,
    ):
        self.workload = workload
        self.device = device
        self.cfg = cfg
        self.steps = steps or settings.SHARE_STEPS
        self.weight = weight
        self.profiles = [profile_network(entry.network) for entry in workload.entries]
        self.rng = np.random.default_rng(cfg.seed)
        self._mappings: dict[tuple, MultiCnnMapping | None] = {}

    @staticmethod
    def key(shares: ShareSteps, designs: Sequence[DesignPoint]) -> tuple:
        return (shares, tuple(design.sort_key() for design in designs))

    def evaluate(self, shares: ShareSteps, designs: Sequence[DesignPoint]) -> MultiCnnMapping | None:
        key = self.key(shares, designs)
        if key not in self._mappings:
            try:
                mapping = evaluate_mapping(
                    self.workload, self.device, [Fraction(k, self.steps) for k in shares], designs, self.weight
                )
            except InfeasibleError as e:
                logger.debug("Rejected mapping %s: %s", shares, e.detail)
                mapping = None
            self._mappings[key] = mapping
        return self._mappings[key]

    def serial_designs(self) -> tuple[DesignPoint, ...]:
        return tuple(serial_design(entry.network, ExecutionMode.THROUGHPUT) for entry in self.workload.entries)

    def initial_state(self) -> tuple[ShareSteps, tuple[DesignPoint, ...], MultiCnnMapping]:
        designs = self.serial_designs()
        n = len(self.workload.entries)
        if self.steps < n:
            raise NoFeasibleMapping(f"{self.steps} share steps cannot give each of {n} CNNs a share")
        equal = (self.steps // n,) * n
        mapping = self.evaluate(equal, designs)
        if mapping is not None:
            return equal, designs, mapping

        logger.info("Equal shares infeasible for all-serial designs, scanning share vectors")
        for shares in share_vectors(n, self.steps):
            mapping = self.evaluate(shares, designs)
            if mapping is not None:
                return shares, designs, mapping
        raise NoFeasibleMapping(f"no share vector lets the all-serial designs fit {self.device.name}")

    def _share_moves(self, shares: ShareSteps) -> list[ShareSteps]:
        moves = []
        spare = self.steps - sum(shares)
        for a, k in enumerate(shares):
            if spare > 0:
                moves.append(shares[:a] + (k + 1,) + shares[a + 1:])
            if k > 1:
                moves.append(shares[:a] + (k - 1,) + shares[a + 1:])
                for b in range(len(shares)):
                    if b != a:
                        moved = list(shares)
                        moved[a] -= 1
                        moved[b] += 1
                        moves.append(tuple(moved))
        return moves

    def neighbour(
        self, shares: ShareSteps, designs: tuple[DesignPoint, ...]
    ) -> tuple[ShareSteps, tuple[DesignPoint, ...]]:
        design_moves = [
            (j, move) for j, design in enumerate(designs) for move in folding_moves(self.profiles[j], design)
        ]
        options = {MultiMoveKind.SHARE: self._share_moves(shares), MultiMoveKind.DESIGN: design_moves}
        kinds = [kind for kind in MultiMoveKind if options[kind]]
        if not kinds:
            return shares, designs
        kind = kinds[int(self.rng.integers(len(kinds)))]
        moves = options[kind]
        move = moves[int(self.rng.integers(len(moves)))]
        if kind == MultiMoveKind.SHARE:
            return move, designs
        j, folding = move
        updated = list(designs)
        updated[j] = apply_folding(designs[j], folding)
        return shares, tuple(updated)

    def run(self) -> MultiCnnMapping:
        shares, designs, mapping = self.initial_state()
        current_cost = mapping.cost
        scale = abs(current_cost) or 1.0
        best, best_key = mapping, self.key(shares, designs)

        temperature = self.cfg.initial_temperature
        iterations = 0
        while temperature > self.cfg.temperature_floor:
            for _ in range(self.cfg.iterations_per_temperature):
                iterations += 1
                candidate_shares, candidate_designs = self.neighbour(shares, designs)
                candidate = self.evaluate(candidate_shares, candidate_designs)
                if candidate is None:
                    continue
                delta = (candidate.cost - current_cost) / scale
                if delta <= 0 or self.rng.random() < math.exp(-delta / temperature):
                    shares, designs, current_cost = candidate_shares, candidate_designs, candidate.cost
                key = self.key(candidate_shares, candidate_designs)
                if candidate.cost < best.cost or (candidate.cost == best.cost and key < best_key):
                    best, best_key = candidate, key
            temperature *= self.cfg.cooling_rate

        logger.info(
            "Multi-CNN annealing: %d iterations, %d distinct mappings, best cost %.6g",
            iterations, len(self._mappings), best.cost,
        )
        return best


def optimize_multi(
    workload: MultiCnnWorkload,
    device: DeviceDescriptor,
    cfg: OptimizerConfig | None = None,
    steps: int | None = None,
    weight: float | None = None,
) -> MultiCnnMapping:
    """Lowest-cost feasible joint mapping the annealer visits."""
    return MultiAnnealer(workload, device, cfg or OptimizerConfig(), steps, weight).run()


def optimize_multi_exhaustive(
    workload: MultiCnnWorkload,
    device: DeviceDescriptor,
    steps: int | None = None,
    weight: float | None = None,
    max_space: int | None = None,
) -> MultiCnnMapping:
    """Exact optimum over the same grid and design set as ``optimize_multi``."""
    steps = steps or settings.SHARE_STEPS
    max_space = max_space or settings.ENUMERATION_BOUND
    n = len(workload.entries)
    options = [
        [
            DesignPoint(stage_configs=configs, mode=ExecutionMode.THROUGHPUT, partitions=((0, entry.network.n_layers),))
            for configs in product(*folding_options(entry.network))
        ]
        for entry in workload.entries
    ]
    size = math.comb(steps, n) * math.prod(len(designs) for designs in options)
    if size > max_space:
        raise SpaceTooLarge(size, max_space)

    best: tuple[float, tuple, MultiCnnMapping] | None = None
    for shares in share_vectors(n, steps):
        fractions = [Fraction(k, steps) for k in shares]
        for designs in product(*options):
            try:
                mapping = evaluate_mapping(workload, device, fractions, designs, weight)
            except InfeasibleError:
                continue
            key = MultiAnnealer.key(shares, designs)
            if best is None or (mapping.cost, key) < best[:2]:
                best = (mapping.cost, key, mapping)
    if best is None:
        raise NoFeasibleMapping(f"no joint mapping of {n} CNNs fits {device.name}")
    return best[2]
