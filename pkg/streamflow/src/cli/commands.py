"""``streamflow`` command-line interface.

Standard output carries only the requested artifact; logs and error messages
go to standard error. Exit codes: 0 ok, 2 bad input, 3 infeasible, 4 I/O.
"""

import csv
import io
import logging
import time
from datetime import datetime, timezone
from functools import wraps
from pathlib import Path
from typing import Optional

import typer
from rich.console import Console
from rich.table import Table

from streamflow.src.cli.descriptors import design_result, mapping_result
from streamflow.src.cli.manifest import build_manifest, file_digest, timed_manifest, write_artifacts
from streamflow.src.cli.schemas import DesignDescriptor, MappingDescriptor
from streamflow.src.config_package import settings
from streamflow.src.dse.annealer import optimize_sa
from streamflow.src.dse.config import load_optimizer_config
from streamflow.src.dse.enumerator import enumerate_designs
from streamflow.src.dse.enums import ParetoMetric, ResourceAxis
from streamflow.src.dse.exceptions import InvalidObjective
from streamflow.src.dse.pareto import pareto_front
from streamflow.src.dse.schemas import EnumerationCaps, Objective, ParetoAxes
from streamflow.src.exceptions import StreamflowError
from streamflow.src.model_ir.parser import load_network
from streamflow.src.model_ir.shapes import layer_summaries
from streamflow.src.multi_cnn.optimizer import optimize_multi
from streamflow.src.multi_cnn.workload import load_workload
from streamflow.src.perf_model.device import load_device

logger = logging.getLogger(__name__)

app = typer.Typer(
    name="streamflow",
    help="Design-space exploration of streaming CNN accelerators.",
    no_args_is_help=True,
    add_completion=False,
)

PARETO_HEADER = ["design_id", "latency_s", "throughput_ips", "dsp", "bram", "lut", "mode", "partitions"]


def handle_errors(command):
    """Report toolflow errors on standard error and exit with their code."""

    @wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except StreamflowError as e:
            logger.debug("%s failed", command.__name__, exc_info=True)
            typer.echo(str(e), err=True)
            raise typer.Exit(code=e.exit_code) from e

    return wrapper


def check_objective(value: str) -> str:
    try:
        Objective.parse(value)
    except InvalidObjective as e:
        raise typer.BadParameter(e.detail) from e
    return value


@app.callback()
def main(
    log_level: Optional[str] = typer.Option(None, "--log-level", help="Overrides LOG_LEVEL."),
):
    logging.basicConfig(
        level=(log_level or settings.LOG_LEVEL).upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


@app.command()
@handle_errors
def parse(net: Path = typer.Argument(..., help="Network description file.")):
    """Print the shape table of a network."""
    network = load_network(net)
    table = Table(title=network.name)
    for column in ("#", "name", "kind", "input", "output", "ops", "weights"):
        table.add_column(column, no_wrap=True)
    for row in layer_summaries(network):
        table.add_row(
            str(row.index), row.name, row.kind.value, str(row.in_shape), str(row.out_shape), str(row.ops), str(row.weights)
        )
    Console(width=160).print(table)


def _emit(text: str | None) -> None:
    if text is not None:
        typer.echo(text, nl=False)


@app.command()
@handle_errors
def optimize(
    net: Path = typer.Argument(..., help="Network description file."),
    device_file: Path = typer.Argument(..., metavar="DEVICE", help="Device description file."),
    objective: str = typer.Option("latency", callback=check_objective, help="'latency' or 'throughput:<batch>'."),
    seed: Optional[int] = typer.Option(None, min=0, max=2**64 - 1, help="Random seed (config file or 0 when unset)."),
    out: Optional[Path] = typer.Option(None, help="Descriptor path; standard output when unset."),
    config: Optional[Path] = typer.Option(None, help="Optimizer key=value file."),
    max_partitions: Optional[int] = typer.Option(None, min=1, help="Largest partition count explored."),
):
    """Search for the best design of one network."""
    goal = Objective.parse(objective)
    started, clock = datetime.now(timezone.utc), time.perf_counter()

    network = load_network(net)
    device = load_device(device_file)
    cfg = load_optimizer_config(config, seed=seed, max_partitions=max_partitions)

    result = optimize_sa(network, device, goal, cfg)
    body = design_result(network, device.name, str(goal), result.report)

    inputs = [file_digest("network", net), file_digest("device", device_file)]
    if config is not None:
        inputs.append(file_digest("config", config))
    core = build_manifest(inputs, cfg.seed, str(goal), body)
    descriptor = DesignDescriptor(result=body, manifest=core)
    _emit(write_artifacts(descriptor, timed_manifest(core, started, time.perf_counter() - clock), out))


@app.command()
@handle_errors
def pareto(
    net: Path = typer.Argument(..., help="Network description file."),
    device_file: Path = typer.Argument(..., metavar="DEVICE", help="Device description file."),
    limit: int = typer.Option(settings.ENUMERATION_BOUND, min=1, help="Largest design space enumerated."),
    max_partitions: int = typer.Option(settings.MAX_PARTITIONS, min=1, help="Largest partition count."),
    metric: ParetoMetric = typer.Option(ParetoMetric.LATENCY, help="Performance axis."),
    resource: ResourceAxis = typer.Option(ResourceAxis.DSP, help="Resource axis."),
    batch: int = typer.Option(1, min=1, help="Batch size for throughput figures."),
):
    """Print the Pareto front of the design space as CSV."""
    network = load_network(net)
    device = load_device(device_file)
    caps = EnumerationCaps(max_partitions=max_partitions, max_space=limit)

    ids = {}
    reports = []
    for index, (design, report) in enumerate(enumerate_designs(network, device, caps, batch)):
        ids[design.sort_key()] = f"d{index:05d}"
        reports.append(report)
    front = pareto_front(reports, ParetoAxes(metric=metric, resource=resource))

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(PARETO_HEADER)
    for report in front:
        writer.writerow(
            [
                ids[report.design.sort_key()],
                f"{report.latency_s:.6e}",
                f"{report.throughput_ips:.6e}",
                report.resources.dsp,
                report.resources.bram,
                report.resources.lut,
                report.design.mode.value,
                report.design.label(),
            ]
        )
    typer.echo(buffer.getvalue(), nl=False)


@app.command()
@handle_errors
def multi(
    workload_file: Path = typer.Argument(..., metavar="WORKLOAD", help="Multi-CNN workload file."),
    device_file: Path = typer.Argument(..., metavar="DEVICE", help="Device description file."),
    seed: Optional[int] = typer.Option(None, min=0, max=2**64 - 1, help="Random seed (config file or 0 when unset)."),
    out: Optional[Path] = typer.Option(None, help="Descriptor path; standard output when unset."),
    config: Optional[Path] = typer.Option(None, help="Optimizer key=value file."),
):
    """Map several CNNs onto one device."""
    started, clock = datetime.now(timezone.utc), time.perf_counter()

    workload = load_workload(workload_file)
    device = load_device(device_file)
    cfg = load_optimizer_config(config, seed=seed)

    mapping = optimize_multi(workload, device, cfg)
    body = mapping_result(workload, mapping)

    inputs = [file_digest("workload", workload_file), file_digest("device", device_file)]
    inputs.extend(file_digest(f"network:{entry.name}", entry.source) for entry in workload.entries if entry.source)
    if config is not None:
        inputs.append(file_digest("config", config))
    core = build_manifest(inputs, cfg.seed, "multi", body)
    descriptor = MappingDescriptor(result=body, manifest=core)
    _emit(write_artifacts(descriptor, timed_manifest(core, started, time.perf_counter() - clock), out))
