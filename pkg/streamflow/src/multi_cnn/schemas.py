from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, field_validator

from streamflow.src.model_ir.schemas import NetworkGraph
from streamflow.src.perf_model.schemas import DeviceDescriptor, PerfReport
from streamflow.src.transforms.schemas import DesignPoint


class WorkloadEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    network: NetworkGraph
    importance: float = Field(..., gt=0)
    target_latency_s: float = Field(..., gt=0)
    source: Path | None = None


class MultiCnnWorkload(BaseModel):
    """CNNs sharing one device; importances are normalized to sum to 1."""

    model_config = ConfigDict(frozen=True)

    entries: tuple[WorkloadEntry, ...]

    @field_validator("entries")
    @classmethod
    def validate_entries(cls, v: tuple[WorkloadEntry, ...]) -> tuple[WorkloadEntry, ...]:
        if len(v) < 2:
            raise ValueError(f"a multi-CNN workload needs at least 2 entries, got {len(v)}")
        names = [entry.name for entry in v]
        if len(set(names)) != len(names):
            raise ValueError(f"workload entry names must be unique: {names}")
        total = sum(entry.importance for entry in v)
        return tuple(entry.model_copy(update={"importance": entry.importance / total}) for entry in v)

    @property
    def weights(self) -> tuple[float, ...]:
        return tuple(entry.importance for entry in self.entries)

    @property
    def targets(self) -> tuple[float, ...]:
        return tuple(entry.target_latency_s for entry in self.entries)

    def __len__(self) -> int:
        return len(self.entries)


class TransferSlot(BaseModel):
    model_config = ConfigDict(frozen=True)

    cnn: int = Field(..., ge=0)
    start: int = Field(..., ge=0)
    duration: int = Field(..., ge=1)
    bits: int = Field(..., ge=1)

    @property
    def end(self) -> int:
        return self.start + self.duration


class MemoryTransferSchedule(BaseModel):
    """Time-division plan for off-chip transfers, repeated every ``period`` cycles."""

    model_config = ConfigDict(frozen=True)

    period: int = Field(..., ge=1)
    slots: tuple[TransferSlot, ...] = ()
    # per CNN: bits needed per input, and the cycle by which they are wanted
    demands: tuple[int, ...]
    deadlines: tuple[int, ...]


class CostBreakdown(BaseModel):
    model_config = ConfigDict(frozen=True)

    cost: float
    deadline_penalty: float
    latency_term: float
    weight: float = Field(..., ge=0, description="lambda applied to latency_term")


class CnnAssignment(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    share: float
    budget: DeviceDescriptor
    design: DesignPoint
    report: PerfReport
    stall_cycles: int = Field(..., ge=0)
    achieved_latency_s: float
    target_latency_s: float
    importance: float


class MultiCnnMapping(BaseModel):
    model_config = ConfigDict(frozen=True)

    device_name: str
    assignments: tuple[CnnAssignment, ...]
    schedule: MemoryTransferSchedule
    breakdown: CostBreakdown

    @property
    def cost(self) -> float:
        return self.breakdown.cost

    @property
    def shares(self) -> tuple[float, ...]:
        return tuple(a.share for a in self.assignments)

    @property
    def designs(self) -> tuple[DesignPoint, ...]:
        return tuple(a.design for a in self.assignments)

    @property
    def budgets(self) -> tuple[DeviceDescriptor, ...]:
        return tuple(a.budget for a in self.assignments)

    @property
    def latencies(self) -> tuple[float, ...]:
        return tuple(a.achieved_latency_s for a in self.assignments)
