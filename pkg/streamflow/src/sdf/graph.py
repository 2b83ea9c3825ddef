"""Synchronous dataflow view of a design.

Stages fire once per network input; rates are tokens per cycle, so the balance
equations are solved over exact rationals.
"""

import logging
from fractions import Fraction

import sympy

from streamflow.src.model_ir.schemas import NetworkGraph
from streamflow.src.perf_model.cycles import check_design, cycles_for_ops
from streamflow.src.perf_model.profile import profile_network
from streamflow.src.sdf.schemas import ConsistencyReport, SdfArc, SdfGraph, SdfStage
from streamflow.src.transforms.schemas import DesignPoint

logger = logging.getLogger(__name__)


def build_sdf(network: NetworkGraph, design: DesignPoint, partition: int | None = None) -> SdfGraph:
    """One stage per layer of ``partition`` (the whole chain when None).

    Tokens are tensor elements per network input, so the arc between stages i
    and i + 1 carries stage i's output element count. Stage cycles come from the
    design's folding.

    Raises:
        FoldingOutOfRange, UnknownLayer: ``design`` does not fit ``network``.
    """
    check_design(design, network)
    start, stop = (0, network.n_layers) if partition is None else design.partitions[partition]

    stages = tuple(
        SdfStage(
            layer_index=p.index,
            name=p.layer.name,
            kind=p.layer.kind,
            config=design.stage_configs[p.index],
            tokens_in=p.in_shape.elements,
            tokens_out=p.out_shape.elements,
            cycles=cycles_for_ops(p.layer.kind, p.ops, design.stage_configs[p.index]),
        )
        for p in profile_network(network)[start:stop]
    )
    arcs = tuple(
        SdfArc(producer=i, consumer=i + 1, tokens=stages[i].tokens_out) for i in range(len(stages) - 1)
    )
    return SdfGraph(stages=stages, arcs=arcs)


def _is_conserving(graph: SdfGraph) -> bool:
    return all(
        arc.tokens == graph.stages[arc.producer].tokens_out == graph.stages[arc.consumer].tokens_in
        for arc in graph.arcs
    )


def _rational(value: Fraction) -> sympy.Rational:
    return sympy.Rational(value.numerator, value.denominator)


def check_consistency(graph: SdfGraph) -> ConsistencyReport:
    """Token conservation and the balance vector of ``graph``.

    The arc rows are closed with the environment row t_n/T_n = t_1/T_1: every
    stage handles exactly one network input per iteration. A graph whose rates
    disagree then has only the zero solution and no balance vector.
    """
    conserving = _is_conserving(graph)
    stages = graph.stages
    first = stages[0].cycles
    if len(stages) == 1:
        return ConsistencyReport(conserving=conserving, balance_vector=(Fraction(first),))

    closing = [Fraction(0)] * len(stages)
    closing[0] -= Fraction(1, first)
    closing[-1] += Fraction(1, stages[-1].cycles)
    rows = [*graph.rate_matrix(), tuple(closing)]
    matrix = sympy.Matrix([[_rational(value) for value in row] for row in rows])

    basis = matrix.nullspace()
    if len(basis) != 1 or basis[0][0] == 0:
        logger.debug("No unique balance vector for %d-stage graph (null space dim %d)", len(stages), len(basis))
        return ConsistencyReport(conserving=conserving, balance_vector=None)

    scaled = basis[0] * (sympy.Integer(first) / basis[0][0])
    balance = tuple(Fraction(int(value.p), int(value.q)) for value in scaled)
    if any(value <= 0 for value in balance):
        return ConsistencyReport(conserving=conserving, balance_vector=None)
    return ConsistencyReport(conserving=conserving, balance_vector=balance)


def initiation_interval(graph: SdfGraph) -> int:
    """Cycles between consecutive inputs in steady state."""
    return max(graph.cycles)
