from typing import Sequence

from streamflow.src.config_package import settings
from streamflow.src.multi_cnn.exceptions import InvalidWorkload
from streamflow.src.multi_cnn.schemas import CostBreakdown, MultiCnnWorkload


def cost_breakdown(
    latencies: Sequence[float], workload: MultiCnnWorkload, weight: float | None = None
) -> CostBreakdown:
    """Weighted deadline-miss hinge plus ``weight`` times the weighted normalized latency."""
    if len(latencies) != len(workload.entries):
        raise InvalidWorkload(f"{len(latencies)} latencies for {len(workload.entries)} CNNs")
    weight = settings.MULTI_COST_LAMBDA if weight is None else weight

    penalty = 0.0
    normalized = 0.0
    for latency, entry in zip(latencies, workload.entries):
        ratio = latency / entry.target_latency_s
        penalty += entry.importance * max(0.0, ratio - 1.0)
        normalized += entry.importance * ratio
    return CostBreakdown(
        cost=penalty + weight * normalized, deadline_penalty=penalty, latency_term=normalized, weight=weight
    )


def multi_objective_cost(
    latencies: Sequence[float], workload: MultiCnnWorkload, weight: float | None = None
) -> float:
    return cost_breakdown(latencies, workload, weight).cost
