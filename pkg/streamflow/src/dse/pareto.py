"""Non-dominated filtering of evaluated designs on a (performance, resource) plane."""

import logging
from typing import Iterable

import numpy as np

from streamflow.src.dse.enums import ParetoMetric
from streamflow.src.dse.exceptions import EmptyInput
from streamflow.src.dse.schemas import ParetoAxes
from streamflow.src.perf_model.schemas import PerfReport

logger = logging.getLogger(__name__)

DOMINANCE_BLOCK = 128


def coordinates(report: PerfReport, axes: ParetoAxes) -> tuple[float, float]:
    """Both axes as costs: lower is better."""
    metric = report.latency_s if axes.metric == ParetoMetric.LATENCY else -report.throughput_ips
    return metric, float(getattr(report.resources, axes.resource.value))


def dominated_mask(points: np.ndarray) -> np.ndarray:
    """``mask[i]`` is True when some point is no worse on every axis and better on one."""
    mask = np.zeros(len(points), dtype=bool)
    for start in range(0, len(points), DOMINANCE_BLOCK):
        block = points[start:start + DOMINANCE_BLOCK, None, :]
        no_worse = (points[None, :, :] <= block).all(axis=2)
        better = (points[None, :, :] < block).any(axis=2)
        mask[start:start + DOMINANCE_BLOCK] = (no_worse & better).any(axis=1)
    return mask


def pareto_front(reports: Iterable[PerfReport], axes: ParetoAxes | None = None) -> list[PerfReport]:
    """Non-dominated feasible reports, sorted by metric then resource."""
    axes = axes or ParetoAxes()
    reports = list(reports)
    if not reports:
        raise EmptyInput("no designs to build a Pareto front from")

    feasible = [report for report in reports if report.feasible]
    if len(feasible) < len(reports):
        logger.warning("Dropping %d infeasible designs from the Pareto input", len(reports) - len(feasible))
    if not feasible:
        raise EmptyInput("every design is infeasible")

    points = np.array([coordinates(report, axes) for report in feasible], dtype=float)
    keep = ~dominated_mask(points)
    front = [report for report, kept in zip(feasible, keep) if kept]
    front.sort(key=lambda report: (*coordinates(report, axes), report.design.sort_key()))
    logger.info("Pareto front: %d of %d designs", len(front), len(feasible))
    return front
