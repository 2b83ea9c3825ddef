from streamflow.src.model_ir.schemas import NetworkGraph
from streamflow.src.multi_cnn.schemas import MultiCnnMapping, MultiCnnWorkload
from streamflow.src.perf_model.cycles import design_cycles
from streamflow.src.perf_model.schemas import PerfReport, ResourceVector
from streamflow.src.transforms.schemas import DesignPoint
from streamflow.src.cli.schemas import (
    CnnResult,
    CostSummary,
    DesignResult,
    LayerFolding,
    MappingResult,
    PerformanceSummary,
    ResourceSummary,
    ScheduleSummary,
    SlotRow,
)


def resource_summary(resources: ResourceVector) -> ResourceSummary:
    return ResourceSummary(dsp=resources.dsp, bram=resources.bram, lut=resources.lut)


def layer_rows(design: DesignPoint, network: NetworkGraph) -> list[LayerFolding]:
    cycles = design_cycles(design, network)
    return [
        LayerFolding(
            index=i, name=layer.name, kind=layer.kind, coarse=config.coarse, fine=config.fine, cycles=cycles[i]
        )
        for i, (layer, config) in enumerate(zip(network.layers, design.stage_configs))
    ]


def performance_summary(report: PerfReport) -> PerformanceSummary:
    return PerformanceSummary(
        batch=report.batch,
        throughput_ips=report.throughput_ips,
        latency_s=report.latency_s,
        performance_gops=report.performance_gops,
        bandwidth_demand_gbps=report.bandwidth_demand_gbps,
        resources=resource_summary(report.resources),
        feasible=report.feasible,
        violations=list(report.violations),
    )


def design_result(network: NetworkGraph, device_name: str, objective: str, report: PerfReport) -> DesignResult:
    design = report.design
    return DesignResult(
        network=network.name,
        device=device_name,
        objective=objective,
        mode=design.mode,
        partitions=[tuple(p) for p in design.partitions],
        layers=layer_rows(design, network),
        performance=performance_summary(report),
    )


def mapping_result(workload: MultiCnnWorkload, mapping: MultiCnnMapping) -> MappingResult:
    names = [entry.name for entry in workload.entries]
    return MappingResult(
        device=mapping.device_name,
        cost=CostSummary(**mapping.breakdown.model_dump()),
        cnns=[
            CnnResult(
                name=a.name,
                importance=a.importance,
                share=a.share,
                budget=resource_summary(a.budget.capacity),
                target_latency_s=a.target_latency_s,
                achieved_latency_s=a.achieved_latency_s,
                stall_cycles=a.stall_cycles,
                layers=layer_rows(a.design, entry.network),
                performance=performance_summary(a.report),
            )
            for entry, a in zip(workload.entries, mapping.assignments)
        ],
        schedule=ScheduleSummary(
            period_cycles=mapping.schedule.period,
            slots=[
                SlotRow(cnn=names[slot.cnn], start=slot.start, duration=slot.duration, bits=slot.bits)
                for slot in mapping.schedule.slots
            ],
        ),
    )
