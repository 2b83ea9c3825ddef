from __future__ import annotations

import numpy as np
import pytest
from pydantic import ValidationError

from conftest import CONV_RELU, SMALL_CHAIN, TINY_CONV
from streamflow.src.config_package import settings
from streamflow.src.dse.annealer import Annealer, apply_folding, folding_moves, optimize_sa, redraw_folding
from streamflow.src.dse.config import load_optimizer_config, parse_optimizer_config
from streamflow.src.dse.enumerator import cut_sets, enumerate_designs, exhaustive_optimum, space_size
from streamflow.src.dse.enums import MoveKind, ObjectiveKind
from streamflow.src.dse.evaluation import evaluate_many
from streamflow.src.dse.exceptions import InvalidObjective, NoFeasibleDesign, OptimizerConfigError, SpaceTooLarge
from streamflow.src.dse.schemas import EnumerationCaps, Objective, OptimizerConfig
from streamflow.src.exceptions import FileAccessError
from streamflow.src.perf_model.estimators import evaluate_design
from streamflow.src.perf_model.profile import profile_network
from streamflow.src.sdf.schemas import StageConfig
from streamflow.src.transforms.enums import ExecutionMode

FAST = dict(iterations_per_temperature=20)

CONV_POOL_FC = "input 3 8 8\nconv name=c1 k=3 s=1 p=0 out=4\npool name=p1 k=2 s=2 type=max\nfc name=f1 out=4\n"


class TestObjective:
    def test_parse_latency(self):
        objective = Objective.parse("latency")
        assert objective.kind == ObjectiveKind.MIN_LATENCY
        assert objective.batch == 1
        assert str(objective) == "latency"

    def test_parse_throughput(self):
        objective = Objective.parse("throughput:256")
        assert objective.kind == ObjectiveKind.MAX_THROUGHPUT
        assert objective.batch == 256
        assert str(objective) == "throughput:256"

    @pytest.mark.parametrize("text", ["speed", "throughput", "throughput:", "throughput:0", "throughput:x", "latency:4"])
    def test_parse_rejects(self, text):
        with pytest.raises(InvalidObjective):
            Objective.parse(text)

    def test_latency_objective_has_no_batch(self):
        with pytest.raises(ValidationError):
            Objective(kind=ObjectiveKind.MIN_LATENCY, batch=8)

    def test_cost_is_lower_for_better_designs(self, make_network, make_device, make_design):
        network = make_network(TINY_CONV)
        slow = evaluate_design(make_design([(1, 1)]), network, make_device())
        fast = evaluate_design(make_design([(4, 9)]), network, make_device())

        for objective in (Objective.min_latency(), Objective.max_throughput(1)):
            assert objective.cost(fast) < objective.cost(slow)


class TestOptimizerConfig:
    def test_defaults_come_from_settings(self):
        cfg = OptimizerConfig()
        assert cfg.cooling_rate == settings.SA_COOLING_RATE
        assert cfg.move_weights == {MoveKind.FOLDING: 0.8, MoveKind.CUT: 0.1, MoveKind.MODE: 0.1}

    def test_move_weights_must_sum_to_one(self):
        with pytest.raises(ValidationError):
            OptimizerConfig(move_weights={MoveKind.FOLDING: 0.5, MoveKind.CUT: 0.1, MoveKind.MODE: 0.1})

    def test_parse_file(self):
        text = "# tuned\nseed=7\ncooling_rate=0.9\nweight_folding=0.7\nweight_cut=0.2\nweight_mode=0.1\n"
        cfg = parse_optimizer_config(text)

        assert cfg.seed == 7
        assert cfg.cooling_rate == 0.9
        assert cfg.move_weights[MoveKind.CUT] == pytest.approx(0.2)

    def test_overrides_win(self):
        assert parse_optimizer_config("seed=7\n", seed=11).seed == 11
        assert parse_optimizer_config("seed=7\n", seed=None).seed == 7

    @pytest.mark.parametrize(
        "text, line",
        [
            ("seed=1\nspeed=3\n", 2),
            ("seed=1\nseed=2\n", 2),
            ("seed 1\n", 1),
            ("seed=1\n\ncooling_rate=1.5\n", 3),
            ("weight_folding=0.5\nweight_cut=0.1\n", 1),
        ],
    )
    def test_parse_errors_carry_line(self, text, line):
        with pytest.raises(OptimizerConfigError) as e:
            parse_optimizer_config(text)
        assert e.value.line == line
        assert str(e.value).startswith(f"OptimizerConfigError {line}:")

    def test_load_missing_file(self, tmp_path):
        with pytest.raises(FileAccessError):
            load_optimizer_config(tmp_path / "missing.cfg")

    def test_load_without_file(self):
        assert load_optimizer_config(None, seed=5).seed == 5

    @pytest.mark.parametrize("overrides", [dict(seed=2**64), dict(seed=-1), dict(max_partitions=0)])
    def test_load_without_file_rejects_out_of_range_overrides(self, overrides):
        with pytest.raises(OptimizerConfigError) as e:
            load_optimizer_config(None, **overrides)
        assert e.value.line is None
        assert e.value.exit_code == 2
        assert str(e.value).startswith(f"OptimizerConfigError: {next(iter(overrides))}:")


class TestEnumeration:
    def test_single_conv_space(self, make_network, make_device):
        network = make_network(TINY_CONV)

        designs = list(enumerate_designs(network, make_device()))

        assert space_size(network) == 9
        assert len(designs) == 9
        assert {(d.stage_configs[0].coarse, d.stage_configs[0].fine) for d, _ in designs} == {
            (c, f) for c in (1, 2, 4) for f in (1, 3, 9)
        }
        assert all(d.partition_count == 1 for d, _ in designs)

    def test_cut_sets(self):
        assert cut_sets(2, 2) == [(), (1,)]
        assert cut_sets(1, 3) == [()]
        assert len(cut_sets(4, 3)) == 1 + 3 + 3

    def test_space_size_counts_modes_per_cut_set(self, make_network):
        # 27 foldings x (1 uncut + 1 cut set in 2 modes)
        assert space_size(make_network(CONV_RELU), EnumerationCaps(max_partitions=2)) == 81
        assert space_size(make_network(SMALL_CHAIN)) == 3024 * 13

    def test_space_too_large_is_raised_before_iterating(self, make_network, make_device):
        with pytest.raises(SpaceTooLarge) as e:
            enumerate_designs(make_network(SMALL_CHAIN), make_device(), EnumerationCaps(max_space=10_000))
        assert e.value.estimate == 39312
        assert e.value.bound == 10_000
        assert e.value.exit_code == 3

    def test_infeasible_designs_are_skipped(self, make_network, make_device):
        # dsp 8 leaves (1,1) (1,3) (2,1) (2,3) (4,1)
        designs = list(enumerate_designs(make_network(TINY_CONV), make_device(dsp_capacity=8)))
        assert len(designs) == 5
        assert all(report.resources.dsp <= 8 for _, report in designs)

    def test_exhaustive_optimum(self, make_network, make_device):
        design, report = exhaustive_optimum(make_network(TINY_CONV), make_device(), Objective.min_latency())
        assert (design.stage_configs[0].coarse, design.stage_configs[0].fine) == (4, 9)
        assert report.feasible

    def test_exhaustive_optimum_without_feasible_design(self, make_network, make_device):
        with pytest.raises(NoFeasibleDesign):
            exhaustive_optimum(make_network(TINY_CONV), make_device(dsp_capacity=0), Objective.min_latency())


class TestEvaluation:
    @pytest.mark.parametrize("threads", [1, 3])
    def test_order_is_preserved(self, monkeypatch, make_network, make_device, threads):
        monkeypatch.setattr(settings, "STREAMFLOW_THREADS", threads)
        monkeypatch.setattr(settings, "EVALUATION_CHUNK", 2)
        network = make_network(CONV_RELU)
        caps = EnumerationCaps(max_partitions=2)

        reports = [report for _, report in enumerate_designs(network, make_device(), caps)]
        monkeypatch.setattr(settings, "STREAMFLOW_THREADS", 1)
        serial = [report for _, report in enumerate_designs(network, make_device(), caps)]

        assert reports == serial

    def test_lazy(self, make_network, make_device, make_design):
        network = make_network(TINY_CONV)
        designs = iter([make_design([(1, 1)]), make_design([(2, 3)])])

        reports = evaluate_many(designs, network, make_device())

        assert next(reports).design.stage_configs[0].fine == 1


class TestAnnealer:
    def test_folding_moves_step_to_adjacent_divisors(self, make_network, make_design):
        network = make_network(TINY_CONV)
        moves = folding_moves(profile_network(network), make_design([(2, 3)]))
        assert sorted(moves) == [(0, "coarse", 1), (0, "coarse", 4), (0, "fine", 1), (0, "fine", 9)]

    @pytest.mark.parametrize("objective", [Objective.min_latency(), Objective.max_throughput(16)])
    def test_single_layer_finds_exhaustive_optimum(self, make_network, make_device, objective):
        network = make_network(TINY_CONV)
        device = make_device()

        result = optimize_sa(network, device, objective, OptimizerConfig(seed=3, **FAST))
        _, best = exhaustive_optimum(network, device, objective)

        assert objective.cost(result.report) == pytest.approx(objective.cost(best))
        assert result.design.stage_configs == best.design.stage_configs

    def test_single_partition_mode_follows_objective(self, make_network, make_device):
        network = make_network(TINY_CONV)
        latency = optimize_sa(network, make_device(), Objective.min_latency(), OptimizerConfig(**FAST))
        throughput = optimize_sa(network, make_device(), Objective.max_throughput(4), OptimizerConfig(**FAST))

        assert latency.design.mode == ExecutionMode.LATENCY
        assert throughput.design.mode == ExecutionMode.THROUGHPUT

    def test_no_feasible_design(self, make_network, make_device):
        with pytest.raises(NoFeasibleDesign):
            optimize_sa(make_network(TINY_CONV), make_device(dsp_capacity=0), Objective.min_latency())

    def test_deterministic_for_a_seed(self, make_network, make_device):
        network = make_network(SMALL_CHAIN)
        cfg = OptimizerConfig(seed=42, max_partitions=2, **FAST)

        first = optimize_sa(network, make_device(dsp_capacity=64), Objective.max_throughput(8), cfg)
        second = optimize_sa(network, make_device(dsp_capacity=64), Objective.max_throughput(8), cfg)

        assert first.design == second.design
        assert first.trace == second.trace

    def test_trace_best_is_monotone(self, make_network, make_device):
        result = optimize_sa(
            make_network(SMALL_CHAIN),
            make_device(dsp_capacity=64),
            Objective.min_latency(),
            OptimizerConfig(seed=5, max_partitions=3, **FAST),
        )
        best = result.trace.best_costs

        assert best
        assert all(later <= earlier for earlier, later in zip(best, best[1:]))
        assert best[-1] == pytest.approx(Objective.min_latency().cost(result.report))

    def test_best_design_respects_partition_limit(self, make_network, make_device):
        result = optimize_sa(
            make_network(SMALL_CHAIN),
            make_device(dsp_capacity=64),
            Objective.max_throughput(4),
            OptimizerConfig(seed=9, max_partitions=2, **FAST),
        )
        assert result.design.partition_count <= 2
        assert result.report.feasible

    def test_neighbour_changes_one_thing(self, make_network, make_device):
        annealer = Annealer(
            make_network(SMALL_CHAIN), make_device(), Objective.min_latency(), OptimizerConfig(max_partitions=3)
        )
        design = annealer.initial_design()
        for _ in range(50):
            candidate = annealer.neighbour(design)
            changed = [
                candidate.stage_configs != design.stage_configs,
                candidate.partitions != design.partitions,
                candidate.mode != design.mode and candidate.partitions == design.partitions,
            ]
            assert sum(changed) <= 1
            design = candidate

    def test_redraw_escapes_single_axis_local_optimum(self, make_network, make_device, make_design):
        network = make_network(CONV_POOL_FC)
        device = make_device(dsp_capacity=48, reconfig_ms=0.0)
        objective = Objective.max_throughput(16)
        profiles = profile_network(network)

        def cost(design):
            report = evaluate_design(design, network, device, objective.batch)
            return objective.cost(report) if report.feasible else None

        # 27 + 18 DSPs; reaching conv (4, 9) needs the fc layer to give some back first
        stuck = make_design([(1, 27), (4, 1), (1, 18)])
        assert cost(make_design([(4, 9), (4, 1), (1, 12)])) < cost(stuck)
        for move in folding_moves(profiles, stuck):
            neighbour_cost = cost(apply_folding(stuck, move))
            assert neighbour_cost is None or neighbour_cost >= cost(stuck)

        rng = np.random.default_rng(0)
        redrawn = [redraw_folding(profiles, stuck, rng) for _ in range(2000)]
        escapes = [
            design
            for design in redrawn
            if design.stage_configs[0] == StageConfig(coarse=4, fine=9) and (cost(design) or 0.0) < cost(stuck)
        ]

        assert escapes
        assert all(design.partitions == stuck.partitions and design.mode == stuck.mode for design in redrawn)

    def test_redraw_share_zero_keeps_single_axis_steps(self, make_network, make_device):
        annealer = Annealer(
            make_network(CONV_POOL_FC),
            make_device(dsp_capacity=48),
            Objective.min_latency(),
            OptimizerConfig(redraw_share=0.0, move_weights={MoveKind.FOLDING: 1.0}),
        )
        design = annealer.initial_design()
        for _ in range(50):
            candidate = annealer.neighbour(design)
            changed = [
                (a.coarse != b.coarse) + (a.fine != b.fine)
                for a, b in zip(design.stage_configs, candidate.stage_configs)
            ]
            assert sum(changed) == 1
            design = candidate
