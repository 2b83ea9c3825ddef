"""Documents written by the ``optimize`` and ``multi`` commands."""

from pydantic import BaseModel, ConfigDict, Field

from streamflow.src.model_ir.enums import LayerKind
from streamflow.src.transforms.enums import ExecutionMode

SCHEMA_VERSION = 1


class InputDigest(BaseModel):
    model_config = ConfigDict(frozen=True)

    role: str
    file: str
    sha256: str


class ManifestCore(BaseModel):
    """Reproducibility record; identical cores mean identical results."""

    model_config = ConfigDict(frozen=True)

    tool_version: str
    inputs: tuple[InputDigest, ...]
    seed: int
    objective: str
    result_digest: str


class RunManifest(ManifestCore):
    started_at: str
    wall_clock_s: float = Field(..., ge=0)


class LayerFolding(BaseModel):
    index: int
    name: str
    kind: LayerKind
    coarse: int
    fine: int
    cycles: int


class ResourceSummary(BaseModel):
    dsp: int
    bram: int
    lut: int


class PerformanceSummary(BaseModel):
    batch: int
    throughput_ips: float
    latency_s: float
    performance_gops: float
    bandwidth_demand_gbps: float
    resources: ResourceSummary
    feasible: bool
    violations: list[str] = []


class DesignResult(BaseModel):
    network: str
    device: str
    objective: str
    mode: ExecutionMode
    partitions: list[tuple[int, int]]
    layers: list[LayerFolding]
    performance: PerformanceSummary


class DesignDescriptor(BaseModel):
    schema_version: int = SCHEMA_VERSION
    result: DesignResult
    manifest: ManifestCore


class SlotRow(BaseModel):
    cnn: str
    start: int
    duration: int
    bits: int


class ScheduleSummary(BaseModel):
    period_cycles: int
    slots: list[SlotRow]


class CnnResult(BaseModel):
    name: str
    importance: float
    share: float
    budget: ResourceSummary
    target_latency_s: float
    achieved_latency_s: float
    stall_cycles: int
    layers: list[LayerFolding]
    performance: PerformanceSummary


class CostSummary(BaseModel):
    cost: float
    deadline_penalty: float
    latency_term: float
    weight: float


class MappingResult(BaseModel):
    device: str
    cost: CostSummary
    cnns: list[CnnResult]
    schedule: ScheduleSummary


class MappingDescriptor(BaseModel):
    schema_version: int = SCHEMA_VERSION
    result: MappingResult
    manifest: ManifestCore
