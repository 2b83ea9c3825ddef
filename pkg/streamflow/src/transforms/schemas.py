from pydantic import BaseModel, ConfigDict, Field, model_validator

from streamflow.src.sdf.schemas import StageConfig
from streamflow.src.transforms.enums import ExecutionMode


class DesignPoint(BaseModel):
    """One candidate accelerator: folding per layer, partitioning and mode.

    ``partitions`` holds half-open layer ranges ``(start, stop)``.
    """

    model_config = ConfigDict(frozen=True)

    stage_configs: tuple[StageConfig, ...] = Field(..., min_length=1)
    mode: ExecutionMode = ExecutionMode.THROUGHPUT
    partitions: tuple[tuple[int, int], ...]

    @model_validator(mode="after")
    def validate_partitions(self):
        expected_start = 0
        for start, stop in self.partitions:
            if start != expected_start:
                raise ValueError(f"partition starting at {start} leaves a gap or overlap at {expected_start}")
            if stop <= start:
                raise ValueError(f"empty partition [{start}, {stop})")
            expected_start = stop
        if expected_start != len(self.stage_configs):
            raise ValueError(f"partitions cover [0, {expected_start}) but the design has {len(self.stage_configs)} layers")
        return self

    @property
    def n_layers(self) -> int:
        return len(self.stage_configs)

    @property
    def partition_count(self) -> int:
        return len(self.partitions)

    @property
    def cut_points(self) -> tuple[int, ...]:
        return tuple(start for start, _ in self.partitions[1:])

    def sort_key(self) -> tuple:
        """Total order used to break cost ties."""
        folding = tuple(value for config in self.stage_configs for value in (config.coarse, config.fine))
        mode = 0 if self.mode == ExecutionMode.THROUGHPUT else 1
        return (mode, len(self.partitions), self.cut_points, folding)

    def label(self) -> str:
        """Compact human-readable partition listing, e.g. ``0:2;2:4``."""
        return ";".join(f"{start}:{stop}" for start, stop in self.partitions)
