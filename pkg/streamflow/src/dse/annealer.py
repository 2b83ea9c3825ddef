"""Simulated-annealing search over folding, partitioning and execution mode.

Candidate generation draws from one seeded numpy stream, so a (network,
device, objective, config) tuple always yields the same trace.
"""

import logging
import math
from typing import Sequence

import numpy as np

from streamflow.src.dse.enums import MoveKind, ObjectiveKind
from streamflow.src.dse.exceptions import NoFeasibleDesign
from streamflow.src.dse.schemas import DseTrace, Objective, OptimizerConfig, SaResult, TraceEntry
from streamflow.src.model_ir.schemas import NetworkGraph
from streamflow.src.perf_model.estimators import evaluate_design
from streamflow.src.perf_model.profile import LayerProfile, profile_network
from streamflow.src.perf_model.schemas import DeviceDescriptor, PerfReport
from streamflow.src.sdf.schemas import StageConfig
from streamflow.src.transforms.enums import ExecutionMode
from streamflow.src.transforms.operations import max_partition_cuts, partitions_from_cuts, serial_design
from streamflow.src.transforms.schemas import DesignPoint

logger = logging.getLogger(__name__)


def folding_moves(profiles: Sequence[LayerProfile], design: DesignPoint) -> list[tuple[int, str, int]]:
    """Every single-axis step to an adjacent divisor, as (layer, axis, value)."""
    moves = []
    for profile, config in zip(profiles, design.stage_configs):
        for axis, options in (("coarse", profile.coarse_options), ("fine", profile.fine_options)):
            position = options.index(getattr(config, axis))
            if position > 0:
                moves.append((profile.index, axis, options[position - 1]))
            if position < len(options) - 1:
                moves.append((profile.index, axis, options[position + 1]))
    return moves


def apply_folding(design: DesignPoint, move: tuple[int, str, int]) -> DesignPoint:
    layer, axis, value = move
    configs = list(design.stage_configs)
    configs[layer] = configs[layer].model_copy(update={axis: value})
    return design.model_copy(update={"stage_configs": tuple(configs)})


def redraw_folding(
    profiles: Sequence[LayerProfile], design: DesignPoint, rng: np.random.Generator, layers: int = 2
) -> DesignPoint:
    """Redraw coarse and fine together, uniformly over the divisors, on up to ``layers`` tunable layers.

    Moving parallelism from one layer to another on a full device takes a
    coarse and a fine change on each layer at once; every single-axis step on
    the way either overflows the DSP budget or slows the bottleneck.
    """
    tunable = [p for p in profiles if len(p.coarse_options) * len(p.fine_options) > 1]
    if not tunable:
        return design
    picked = rng.choice(len(tunable), size=min(layers, len(tunable)), replace=False)
    configs = list(design.stage_configs)
    for position in sorted(int(i) for i in picked):
        profile = tunable[position]
        configs[profile.index] = StageConfig(
            coarse=profile.coarse_options[int(rng.integers(len(profile.coarse_options)))],
            fine=profile.fine_options[int(rng.integers(len(profile.fine_options)))],
        )
    return design.model_copy(update={"stage_configs": tuple(configs)})


class Annealer:
    def __init__(self, network: NetworkGraph, device: DeviceDescriptor, objective: Objective, cfg: OptimizerConfig):
        self.network = network
        self.device = device
        self.objective = objective
        self.cfg = cfg
        self.profiles = profile_network(network)
        self.n_layers = network.n_layers
        self.max_partitions = min(self.n_layers, cfg.max_partitions or self.n_layers)
        self.rng = np.random.default_rng(cfg.seed)
        self._reports: dict[tuple, PerfReport] = {}
        # both modes coincide on one partition; report the one the objective asks for
        self.single_mode = (
            ExecutionMode.LATENCY if objective.kind == ObjectiveKind.MIN_LATENCY else ExecutionMode.THROUGHPUT
        )

    def evaluate(self, design: DesignPoint) -> PerfReport:
        key = design.sort_key()
        report = self._reports.get(key)
        if report is None:
            report = evaluate_design(design, self.network, self.device, self.objective.batch)
            self._reports[key] = report
        return report

    def initial_design(self) -> DesignPoint:
        cuts = max_partition_cuts(self.n_layers, self.max_partitions)
        return serial_design(self.network, ExecutionMode.THROUGHPUT if cuts else self.single_mode, cuts)

    def _cut_moves(self, design: DesignPoint) -> list[tuple[int, ...]]:
        cuts = design.cut_points
        moves: list[tuple[int, ...]] = []
        if len(cuts) + 1 < self.max_partitions:
            moves.extend(tuple(sorted((*cuts, c))) for c in range(1, self.n_layers) if c not in cuts)
        for i, cut in enumerate(cuts):
            moves.append(cuts[:i] + cuts[i + 1:])
            lower = cuts[i - 1] if i > 0 else 0
            upper = cuts[i + 1] if i + 1 < len(cuts) else self.n_layers
            for shifted in (cut - 1, cut + 1):
                if lower < shifted < upper:
                    moves.append(cuts[:i] + (shifted,) + cuts[i + 1:])
        return moves

    def _apply_cuts(self, design: DesignPoint, cuts: tuple[int, ...]) -> DesignPoint:
        mode = design.mode if cuts else self.single_mode
        return DesignPoint(
            stage_configs=design.stage_configs,
            mode=mode,
            partitions=partitions_from_cuts(self.n_layers, cuts),
        )

    def neighbour(self, design: DesignPoint) -> DesignPoint:
        """One random move away from ``design``; ``design`` itself when no move exists."""
        options: dict[MoveKind, list] = {
            MoveKind.FOLDING: folding_moves(self.profiles, design),
            MoveKind.CUT: self._cut_moves(design),
            MoveKind.MODE: [None] if design.partition_count > 1 else [],
        }
        kinds = [kind for kind in MoveKind if options[kind]]
        if not kinds:
            return design

        weights = np.array([self.cfg.move_weights[kind] for kind in kinds])
        if weights.sum() <= 0:
            weights = np.ones(len(kinds))
        kind = kinds[int(self.rng.choice(len(kinds), p=weights / weights.sum()))]
        moves = options[kind]
        move = moves[int(self.rng.integers(len(moves)))]

        if kind == MoveKind.FOLDING:
            if self.rng.random() < self.cfg.redraw_share:
                return redraw_folding(self.profiles, design, self.rng)
            return apply_folding(design, move)
        if kind == MoveKind.CUT:
            return self._apply_cuts(design, move)
        flipped = ExecutionMode.LATENCY if design.mode == ExecutionMode.THROUGHPUT else ExecutionMode.THROUGHPUT
        return design.model_copy(update={"mode": flipped})

    def run(self) -> SaResult:
        """Anneal from the all-serial design and return the best feasible point seen.

        Costs are scaled by the starting cost so one temperature schedule fits
        both objectives. Infeasible candidates are never accepted but still
        leave a trace entry, so the trace has one entry per iteration.

        Raises:
            NoFeasibleDesign: the all-serial design already overflows the device.
        """
        # 1. Start from the all-serial design; nothing smaller exists
        current = self.initial_design()
        report = self.evaluate(current)
        if not report.feasible:
            raise NoFeasibleDesign(
                f"all-serial design of {self.network.name} does not fit {self.device.name}: "
                + ", ".join(report.violations)
            )

        current_cost = self.objective.cost(report)
        scale = abs(current_cost) or 1.0
        best, best_report, best_cost = current, report, current_cost
        entries: list[TraceEntry] = []

        # 2. Metropolis steps at each temperature, then geometric cooling
        temperature = self.cfg.initial_temperature
        iteration = 0
        while temperature > self.cfg.temperature_floor:
            for _ in range(self.cfg.iterations_per_temperature):
                iteration += 1
                candidate = self.neighbour(current)
                candidate_report = self.evaluate(candidate)
                if not candidate_report.feasible:
                    entries.append(TraceEntry(iteration, None, False, best_cost))
                    continue

                cost = self.objective.cost(candidate_report)
                delta = (cost - current_cost) / scale
                accepted = delta <= 0 or self.rng.random() < math.exp(-delta / temperature)
                if accepted:
                    current, current_cost = candidate, cost
                if cost < best_cost or (cost == best_cost and candidate.sort_key() < best.sort_key()):
                    best, best_report, best_cost = candidate, candidate_report, cost
                entries.append(TraceEntry(iteration, cost, accepted, best_cost))
            temperature *= self.cfg.cooling_rate

        # 3. Report the best design, not the last one accepted
        logger.info(
            "Annealing %s for %s: %d iterations, %d distinct designs, best cost %.6g",
            self.network.name, self.objective, iteration, len(self._reports), best_cost,
        )
        return SaResult(design=best, report=best_report, trace=DseTrace(entries=tuple(entries)))


def optimize_sa(
    network: NetworkGraph, device: DeviceDescriptor, objective: Objective, cfg: OptimizerConfig | None = None
) -> SaResult:
    """Best feasible design the annealer visits, with its report and trace."""
    return Annealer(network, device, objective, cfg or OptimizerConfig()).run()
