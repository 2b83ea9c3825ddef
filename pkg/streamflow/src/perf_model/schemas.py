from pydantic import BaseModel, ConfigDict, Field, field_validator

from streamflow.src.config_package import settings
from streamflow.src.transforms.schemas import DesignPoint

WORD_BITS = (8, 16, 32)


class ResourceVector(BaseModel):
    model_config = ConfigDict(frozen=True)

    dsp: int = Field(default=0, ge=0)
    bram: int = Field(default=0, ge=0)
    lut: int = Field(default=0, ge=0)

    def __add__(self, other: "ResourceVector") -> "ResourceVector":
        return ResourceVector(dsp=self.dsp + other.dsp, bram=self.bram + other.bram, lut=self.lut + other.lut)

    def maximum(self, other: "ResourceVector") -> "ResourceVector":
        """Componentwise maximum."""
        return ResourceVector(
            dsp=max(self.dsp, other.dsp), bram=max(self.bram, other.bram), lut=max(self.lut, other.lut)
        )

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.dsp, self.bram, self.lut)


class DeviceDescriptor(BaseModel):
    """Target device (or a per-CNN budget carved out of one).

    Capacities may be zero for budgets floored from small shares.
    """

    model_config = ConfigDict(frozen=True)

    name: str = "device"
    dsp_capacity: int = Field(..., ge=0)
    bram_capacity: int = Field(..., ge=0, description="18 Kbit blocks")
    lut_capacity: int = Field(..., ge=0)
    clock_mhz: float = Field(..., gt=0)
    mem_bandwidth_gbps: float = Field(..., gt=0)
    reconfig_ms: float = Field(default=0.0, ge=0)
    word_bits: int = 16
    lut_alpha: float = Field(default_factory=lambda: settings.LUT_ALPHA, ge=0)
    lut_beta: float = Field(default_factory=lambda: settings.LUT_BETA, ge=0)

    @field_validator("word_bits")
    @classmethod
    def validate_word_bits(cls, v: int) -> int:
        if v not in WORD_BITS:
            raise ValueError(f"word_bits must be one of {WORD_BITS}, got {v}")
        return v

    @property
    def clock_hz(self) -> float:
        return self.clock_mhz * 1e6

    @property
    def bandwidth_bps(self) -> float:
        return self.mem_bandwidth_gbps * 1e9

    @property
    def reconfig_s(self) -> float:
        return self.reconfig_ms * 1e-3

    @property
    def capacity(self) -> ResourceVector:
        return ResourceVector(dsp=self.dsp_capacity, bram=self.bram_capacity, lut=self.lut_capacity)


class FitVerdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    feasible: bool
    violations: tuple[str, ...] = ()


class PerfReport(BaseModel):
    """Estimates for one design point on one device."""

    model_config = ConfigDict(frozen=True)

    design: DesignPoint
    batch: int = Field(..., ge=1)
    throughput_ips: float
    latency_s: float
    resources: ResourceVector
    bandwidth_demand_gbps: float
    feasible: bool
    violations: tuple[str, ...] = ()
    performance_gops: float = 0.0
