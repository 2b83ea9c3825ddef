import logging

from streamflow.src.config_package import settings
from streamflow.src.dse.annealer import optimize_sa
from streamflow.src.dse.schemas import GapReport, Objective, OptimizerConfig
from streamflow.src.model_ir.schemas import NetworkGraph
from streamflow.src.perf_model.estimators import evaluate_design
from streamflow.src.perf_model.schemas import DeviceDescriptor

logger = logging.getLogger(__name__)


def latency_throughput_gap(
    network: NetworkGraph,
    device: DeviceDescriptor,
    cfg: OptimizerConfig | None = None,
    batch: int | None = None,
) -> GapReport:
    """How much single-input latency a throughput-tuned design gives away.

    Runs the annealer once per objective and compares both winners at batch 1.
    """
    batch = batch or settings.GAP_BATCH
    latency_result = optimize_sa(network, device, Objective.min_latency(), cfg)
    throughput_result = optimize_sa(network, device, Objective.max_throughput(batch), cfg)

    throughput_report = evaluate_design(throughput_result.design, network, device, batch=1)
    ratio = throughput_report.latency_s / latency_result.report.latency_s
    logger.info("Latency gap for %s on %s: %.4g", network.name, device.name, ratio)
    return GapReport(
        ratio=ratio,
        batch=batch,
        latency_design=latency_result.design,
        throughput_design=throughput_result.design,
        latency_report=latency_result.report,
        throughput_report=throughput_report,
    )
