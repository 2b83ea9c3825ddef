from typing import NamedTuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from streamflow.src.config_package import settings
from streamflow.src.dse.enums import MoveKind, ObjectiveKind, ParetoMetric, ResourceAxis
from streamflow.src.dse.exceptions import InvalidObjective
from streamflow.src.perf_model.schemas import PerfReport
from streamflow.src.transforms.schemas import DesignPoint

DEFAULT_MOVE_WEIGHTS = {MoveKind.FOLDING: 0.8, MoveKind.CUT: 0.1, MoveKind.MODE: 0.1}


class Objective(BaseModel):
    """What the optimizer minimizes; infeasible designs are always rejected."""

    model_config = ConfigDict(frozen=True)

    kind: ObjectiveKind
    batch: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def validate_batch(self):
        if self.kind == ObjectiveKind.MIN_LATENCY and self.batch != 1:
            raise ValueError("latency objective is defined for a single input")
        return self

    @classmethod
    def max_throughput(cls, batch: int) -> "Objective":
        return cls(kind=ObjectiveKind.MAX_THROUGHPUT, batch=batch)

    @classmethod
    def min_latency(cls) -> "Objective":
        return cls(kind=ObjectiveKind.MIN_LATENCY)

    @classmethod
    def parse(cls, text: str) -> "Objective":
        """``latency`` or ``throughput:<batch>``."""
        if text == ObjectiveKind.MIN_LATENCY.value:
            return cls.min_latency()
        kind, sep, batch = text.partition(":")
        if kind != ObjectiveKind.MAX_THROUGHPUT.value or not sep:
            raise InvalidObjective(f"objective must be 'latency' or 'throughput:<batch>', got '{text}'")
        try:
            value = int(batch)
        except ValueError:
            raise InvalidObjective(f"batch must be an integer, got '{batch}'") from None
        if value < 1:
            raise InvalidObjective(f"batch must be >= 1, got {value}")
        return cls.max_throughput(value)

    def cost(self, report: PerfReport) -> float:
        """Lower is better."""
        if self.kind == ObjectiveKind.MAX_THROUGHPUT:
            return -report.throughput_ips
        return report.latency_s

    def __str__(self) -> str:
        if self.kind == ObjectiveKind.MAX_THROUGHPUT:
            return f"{self.kind.value}:{self.batch}"
        return self.kind.value


class OptimizerConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    seed: int = Field(default=0, ge=0, lt=2**64)
    initial_temperature: float = Field(default_factory=lambda: settings.SA_INITIAL_TEMPERATURE, gt=0)
    cooling_rate: float = Field(default_factory=lambda: settings.SA_COOLING_RATE, gt=0, lt=1)
    iterations_per_temperature: int = Field(default_factory=lambda: settings.SA_ITERATIONS_PER_TEMPERATURE, ge=1)
    temperature_floor: float = Field(default_factory=lambda: settings.SA_TEMPERATURE_FLOOR, gt=0)
    redraw_share: float = Field(default_factory=lambda: settings.SA_REDRAW_SHARE, ge=0, le=1)
    move_weights: dict[MoveKind, float] = Field(default_factory=lambda: dict(DEFAULT_MOVE_WEIGHTS))
    # None: up to one partition per layer
    max_partitions: int | None = Field(default=None, ge=1)

    @field_validator("move_weights")
    @classmethod
    def validate_move_weights(cls, v: dict[MoveKind, float]) -> dict[MoveKind, float]:
        weights = {kind: float(v.get(kind, 0.0)) for kind in MoveKind}
        if any(weight < 0 for weight in weights.values()):
            raise ValueError("move weights must be non-negative")
        if abs(sum(weights.values()) - 1.0) > 1e-9:
            raise ValueError(f"move weights must sum to 1, got {sum(weights.values())}")
        return weights


class TraceEntry(NamedTuple):
    iteration: int
    # None when the candidate was infeasible
    candidate_cost: float | None
    accepted: bool
    best_cost: float


class DseTrace(BaseModel):
    model_config = ConfigDict(frozen=True)

    entries: tuple[TraceEntry, ...] = ()

    @property
    def best_costs(self) -> list[float]:
        return [entry.best_cost for entry in self.entries]


class SaResult(NamedTuple):
    design: DesignPoint
    report: PerfReport
    trace: DseTrace


class EnumerationCaps(BaseModel):
    model_config = ConfigDict(frozen=True)

    max_partitions: int = Field(default_factory=lambda: settings.MAX_PARTITIONS, ge=1)
    max_space: int = Field(default_factory=lambda: settings.ENUMERATION_BOUND, ge=1)


class ParetoAxes(BaseModel):
    model_config = ConfigDict(frozen=True)

    metric: ParetoMetric = ParetoMetric.LATENCY
    resource: ResourceAxis = ResourceAxis.DSP


class GapReport(BaseModel):
    """Latency of the throughput-optimal design over that of the latency-optimal one."""

    model_config = ConfigDict(frozen=True)

    ratio: float
    batch: int
    latency_design: DesignPoint
    throughput_design: DesignPoint
    latency_report: PerfReport
    # evaluated at batch 1 so both latencies are comparable
    throughput_report: PerfReport
